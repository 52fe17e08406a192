/* Acceptance S1, mocked: entering the six requirements in order yields two
 * repair groups (the mb/cpu diagnosis first, its item hw1, then the usage
 * diagnosis with energystar), and applying the first group's repair
 * rewrites the form so the next response is solutions = [hw1].
 */

import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { ApiClient } from '../src/api.js';
import { mountApp, type App } from '../src/app.js';
import { DEBOUNCE_MS } from '../src/session.js';
import { mockServiceFetch } from './mock_service.js';

interface Setup {
  app: App;
  root: HTMLElement;
}

async function mount(): Promise<Setup> {
  const root = document.createElement('div');
  document.body.appendChild(root);
  const api = new ApiClient('', mockServiceFetch());
  const app = mountApp(root, { api, kbName: 'pc' });
  await app.ready;
  await app.session.settled();
  return { app, root };
}

async function enter(app: App, root: HTMLElement, name: string, value: string): Promise<void> {
  const control = root.querySelector<HTMLSelectElement | HTMLInputElement>(
    `[data-var="${name}"]:not(.form-field)`,
  )!;
  control.value = value;
  control.dispatchEvent(new Event(control instanceof HTMLSelectElement ? 'change' : 'input'));
  await vi.advanceTimersByTimeAsync(DEBOUNCE_MS);
  await app.session.settled();
}

function itemCards(root: HTMLElement): string[] {
  return [...root.querySelectorAll('.item-card')].map((c) => c.textContent ?? '');
}

beforeEach(() => {
  vi.useFakeTimers();
  document.body.textContent = '';
});

afterEach(() => {
  vi.useRealTimers();
});

describe('S1: interactive repair session', () => {
  it('walks the six requirements to two repair groups and back to hw1', async () => {
    const { app, root } = await mount();

    // An empty selection shows the whole assortment.
    expect(itemCards(root)).toEqual(['hw1', 'hw2', 'energystar']);

    await enter(app, root, 'usage', 'Scientific');
    await enter(app, root, 'eefficiency', 'high');
    await enter(app, root, 'maxprice', '1700');
    await enter(app, root, 'country', 'Austria');
    expect(itemCards(root)).toEqual(['hw1']);

    // The fifth requirement makes the set inconsistent.
    await enter(app, root, 'mb', 'MBSilver');
    expect(root.querySelectorAll('.repair-group')).toHaveLength(2);

    await enter(app, root, 'cpu', 'CPUD');
    const groups = [...root.querySelectorAll('.repair-group')];
    expect(groups).toHaveLength(2);
    expect(groups[0]!.querySelector('h4')!.textContent).toBe(
      'Diagnosis 1: change mb, cpu',
    );
    expect(
      [...groups[0]!.querySelectorAll('.item-chip')].map((c) => c.textContent),
    ).toEqual(['hw1']);
    expect(groups[1]!.querySelector('h4')!.textContent).toBe('Diagnosis 2: change usage');
    expect(
      [...groups[1]!.querySelectorAll('.item-chip')].map((c) => c.textContent),
    ).toEqual(['energystar', 'energystar']);
    expect(groups[0]!.querySelector('.repair-support')!.textContent).toBe(
      'support 2/6 (33%)',
    );

    // Apply the first diagnosis' repair: the form follows, hw1 matches.
    groups[0]!.querySelector<HTMLButtonElement>('.apply-repair')!.click();
    await app.session.settled();

    expect(root.querySelector<HTMLSelectElement>('select[data-var="mb"]')!.value).toBe(
      'MBDiamond',
    );
    expect(root.querySelector<HTMLSelectElement>('select[data-var="cpu"]')!.value).toBe(
      'CPUS',
    );
    expect(app.session.selections()).toEqual([
      { var: 'usage', value: 'Scientific' },
      { var: 'eefficiency', value: 'high' },
      { var: 'maxprice', value: 1700 },
      { var: 'country', value: 'Austria' },
      { var: 'mb', value: 'MBDiamond' },
      { var: 'cpu', value: 'CPUS' },
    ]);
    expect(itemCards(root)).toEqual(['hw1']);
    expect(root.querySelectorAll('.repair-group')).toHaveLength(0);

    app.dispose();
    console.log('S1 (mocked): PASS');
  });

  it('clicking a proposed item pins the query to it', async () => {
    const { app, root } = await mount();
    await enter(app, root, 'usage', 'Scientific');
    await enter(app, root, 'eefficiency', 'high');
    await enter(app, root, 'maxprice', '1700');
    await enter(app, root, 'country', 'Austria');
    await enter(app, root, 'mb', 'MBSilver');
    await enter(app, root, 'cpu', 'CPUD');

    const chips = [...root.querySelectorAll<HTMLButtonElement>('.item-chip')];
    chips[chips.length - 1]!.click();
    await app.session.settled();

    // The pinned explanation only proposes ways to reach energystar.
    const groups = [...root.querySelectorAll('.repair-group')];
    expect(groups).toHaveLength(1);
    expect(groups[0]!.querySelector('h4')!.textContent).toBe('Diagnosis 1: change usage');
    app.dispose();
  });
});
