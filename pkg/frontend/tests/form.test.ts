import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import { ApiClient, type KbSummary } from '../src/api.js';
import { QuestionForm } from '../src/form.js';
import { DEBOUNCE_MS, RecommendSession } from '../src/session.js';
import { recordingFetch } from './mock_service.js';
import { SUMMARY } from './service_fixtures.js';

const summary = JSON.parse(SUMMARY) as KbSummary;

interface Setup {
  form: QuestionForm;
  session: RecommendSession;
  root: HTMLElement;
  bodies: unknown[];
}

function setup(): Setup {
  const root = document.createElement('div');
  document.body.appendChild(root);
  const bodies: unknown[] = [];
  const session = new RecommendSession(new ApiClient('', recordingFetch(bodies)), 'pc');
  const form = new QuestionForm(root, session);
  form.render(summary.questions);
  return { form, session, root, bodies };
}

function changeSelect(root: HTMLElement, name: string, value: string): void {
  const select = root.querySelector<HTMLSelectElement>(`select[data-var="${name}"]`)!;
  select.value = value;
  select.dispatchEvent(new Event('change'));
}

function typeNumber(root: HTMLElement, name: string, value: string): void {
  const input = root.querySelector<HTMLInputElement>(`input[data-var="${name}"]`)!;
  input.value = value;
  input.dispatchEvent(new Event('input'));
}

beforeEach(() => {
  vi.useFakeTimers();
  document.body.textContent = '';
});

afterEach(() => {
  vi.useRealTimers();
});

describe('rendering', () => {
  it('renders one control per question, in question order', () => {
    const { root } = setup();
    const fields = [...root.querySelectorAll<HTMLElement>('.form-field')];
    expect(fields.map((f) => f.dataset.var)).toEqual([
      'usage',
      'eefficiency',
      'maxprice',
      'country',
      'mb',
      'cpu',
    ]);
    expect(root.querySelectorAll('select')).toHaveLength(5);
    expect(root.querySelectorAll('input[type="number"]')).toHaveLength(1);
  });

  it('marks keep-tagged variables with a badge', () => {
    const { root } = setup();
    const badges = [...root.querySelectorAll<HTMLElement>('.keep-badge')];
    expect(badges).toHaveLength(1);
    expect(badges[0]!.closest('.form-field')!.getAttribute('data-var')).toBe('country');
  });

  it('offers an explicit no-preference entry plus every domain value', () => {
    const { root } = setup();
    const select = root.querySelector<HTMLSelectElement>('select[data-var="usage"]')!;
    const values = [...select.options].map((o) => o.value);
    expect(values).toEqual(['', 'Internet', 'Office', 'Scientific']);
  });

  it('bounds the numeric input by the range domain', () => {
    const { root } = setup();
    const input = root.querySelector<HTMLInputElement>('input[data-var="maxprice"]')!;
    expect(input.min).toBe('0');
    expect(input.max).toBe('3000');
  });
});

describe('input handling', () => {
  it('selecting a dropdown value adds the requirement', () => {
    const { root, session } = setup();
    changeSelect(root, 'usage', 'Scientific');
    expect(session.selections()).toEqual([{ var: 'usage', value: 'Scientific' }]);
  });

  it('selecting no-preference clears the requirement', () => {
    const { root, session } = setup();
    changeSelect(root, 'usage', 'Scientific');
    changeSelect(root, 'mb', 'MBSilver');
    changeSelect(root, 'usage', '');
    expect(session.selections()).toEqual([{ var: 'mb', value: 'MBSilver' }]);
  });

  it('a valid number becomes an integer requirement', () => {
    const { root, session } = setup();
    typeNumber(root, 'maxprice', '1700');
    expect(session.selections()).toEqual([{ var: 'maxprice', value: 1700 }]);
  });

  it('an out-of-range number shows an inline error and sends nothing', async () => {
    const { root, session, bodies } = setup();
    typeNumber(root, 'maxprice', '5000');
    const error = root.querySelector<HTMLElement>(
      '.form-field[data-var="maxprice"] .field-error',
    )!;
    expect(error.hidden).toBe(false);
    expect(error.textContent).toContain('between 0 and 3000');
    expect(session.selections()).toEqual([]);
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS * 2);
    expect(bodies).toHaveLength(0);
  });

  it('a non-integer shows the inline error too', () => {
    const { root, session } = setup();
    typeNumber(root, 'maxprice', '16.5');
    const error = root.querySelector<HTMLElement>(
      '.form-field[data-var="maxprice"] .field-error',
    )!;
    expect(error.hidden).toBe(false);
    expect(session.selections()).toEqual([]);
  });

  it('correcting an invalid number clears the error and selects', () => {
    const { root, session } = setup();
    typeNumber(root, 'maxprice', '5000');
    typeNumber(root, 'maxprice', '2999');
    const error = root.querySelector<HTMLElement>(
      '.form-field[data-var="maxprice"] .field-error',
    )!;
    expect(error.hidden).toBe(true);
    expect(session.selections()).toEqual([{ var: 'maxprice', value: 2999 }]);
  });

  it('emptying the numeric input clears the requirement', () => {
    const { root, session } = setup();
    typeNumber(root, 'maxprice', '1700');
    typeNumber(root, 'maxprice', '');
    expect(session.selections()).toEqual([]);
  });
});

describe('refresh', () => {
  it('syncs control values from the selections', () => {
    const { root, form } = setup();
    form.refresh([
      { var: 'mb', value: 'MBDiamond' },
      { var: 'maxprice', value: 1500 },
    ]);
    expect(root.querySelector<HTMLSelectElement>('select[data-var="mb"]')!.value).toBe(
      'MBDiamond',
    );
    expect(
      root.querySelector<HTMLInputElement>('input[data-var="maxprice"]')!.value,
    ).toBe('1500');
    expect(root.querySelector<HTMLSelectElement>('select[data-var="usage"]')!.value).toBe('');
  });

  it('does not clobber the control being edited', () => {
    const { root, form } = setup();
    const input = root.querySelector<HTMLInputElement>('input[data-var="maxprice"]')!;
    input.value = '17';
    input.focus();
    form.refresh([{ var: 'maxprice', value: 1700 }]);
    expect(input.value).toBe('17');
  });
});
