/* Question form: one control per user variable.
 *
 * Enumerated domains render as a dropdown with an explicit "no preference"
 * entry; integer ranges render as a numeric input validated inline, and an
 * out-of-range value never reaches the session (so no request fires).
 * Variables tagged keep get a visible badge: the engine never proposes
 * removing them.
 */

import type { Question } from './api.js';
import type { RecommendSession, Selection } from './session.js';

export class QuestionForm {
  private controls = new Map<string, HTMLSelectElement | HTMLInputElement>();
  private errorSlots = new Map<string, HTMLElement>();

  constructor(
    private root: HTMLElement,
    private session: RecommendSession,
  ) {}

  render(questions: Question[]): void {
    this.root.textContent = '';
    this.controls.clear();
    this.errorSlots.clear();
    for (const question of questions) {
      this.root.appendChild(this.buildField(question));
    }
  }

  /** Sync control values from the session, e.g. after a repair is applied. */
  refresh(selections: Selection[]): void {
    const byVar = new Map(selections.map((s) => [s.var, s.value]));
    for (const [name, control] of this.controls) {
      if (control === document.activeElement) {
        continue;
      }
      const value = byVar.get(name);
      const text = value === undefined ? '' : String(value);
      if (control.value !== text) {
        control.value = text;
        this.showError(name, null);
      }
    }
  }

  control(name: string): HTMLSelectElement | HTMLInputElement {
    const control = this.controls.get(name);
    if (control === undefined) {
      throw new Error(`no control for variable ${name}`);
    }
    return control;
  }

  private buildField(question: Question): HTMLElement {
    const field = document.createElement('div');
    field.className = 'form-field';
    field.dataset.var = question.name;

    const label = document.createElement('label');
    label.htmlFor = `q-${question.name}`;
    label.textContent = question.name;
    if (question.keep) {
      const badge = document.createElement('span');
      badge.className = 'keep-badge';
      badge.textContent = 'keep';
      badge.title = 'this requirement is never proposed for removal';
      label.appendChild(badge);
    }
    field.appendChild(label);

    const control =
      question.domain.kind === 'enum'
        ? this.buildEnumControl(question)
        : this.buildRangeControl(question);
    control.id = `q-${question.name}`;
    control.dataset.var = question.name;
    field.appendChild(control);

    const errorSlot = document.createElement('span');
    errorSlot.className = 'field-error';
    errorSlot.hidden = true;
    field.appendChild(errorSlot);

    this.controls.set(question.name, control);
    this.errorSlots.set(question.name, errorSlot);
    return field;
  }

  private buildEnumControl(question: Question): HTMLSelectElement {
    const select = document.createElement('select');
    const empty = document.createElement('option');
    empty.value = '';
    empty.textContent = '(no preference)';
    select.appendChild(empty);
    if (question.domain.kind === 'enum') {
      for (const value of question.domain.values) {
        const option = document.createElement('option');
        option.value = value;
        option.textContent = value;
        select.appendChild(option);
      }
    }
    select.addEventListener('change', () => {
      if (select.value === '') {
        this.session.clearSelection(question.name);
      } else {
        this.session.setSelection(question.name, select.value);
      }
    });
    return select;
  }

  private buildRangeControl(question: Question): HTMLInputElement {
    const input = document.createElement('input');
    input.type = 'number';
    if (question.domain.kind !== 'range') {
      return input;
    }
    const { lo, hi } = question.domain;
    input.min = String(lo);
    input.max = String(hi);
    input.addEventListener('input', () => {
      const raw = input.value.trim();
      if (raw === '') {
        this.showError(question.name, null);
        this.session.clearSelection(question.name);
        return;
      }
      const value = Number(raw);
      if (!Number.isInteger(value) || value < lo || value > hi) {
        this.showError(question.name, `enter an integer between ${lo} and ${hi}`);
        return;
      }
      this.showError(question.name, null);
      this.session.setSelection(question.name, value);
    });
    return input;
  }

  private showError(name: string, message: string | null): void {
    const slot = this.errorSlots.get(name);
    if (slot === undefined) {
      return;
    }
    slot.hidden = message === null;
    slot.textContent = message ?? '';
  }
}
