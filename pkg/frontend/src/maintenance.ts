/* Maintenance view: regression test statuses and knowledge-base diagnosis.
 *
 * Tests tagged |show| are listed by default; the rest hide behind a
 * checkbox. A knowledge-base diagnosis names the constraints to remove,
 * with their pretty-printed text. Before running anything the view
 * re-fetches the KB source; if it changed on the server, a displayed
 * diagnosis may name constraints that no longer exist, so it is replaced
 * by a prompt to re-run against the fresh version.
 */

import type { ApiClient, KbDiagnosisResponse, TestRow } from './api.js';

export class MaintenanceView {
  private rows: TestRow[] | null = null;
  private diagnosis: KbDiagnosisResponse | null = null;
  private showAll = false;
  private lastSource: string | null = null;
  private kbChanged = false;
  private error: string | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private kbName: string,
  ) {}

  /** Initial fetch: record the KB source and run the test suite. */
  async load(): Promise<void> {
    try {
      const summary = await this.api.getKb(this.kbName);
      this.lastSource = summary.source;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
      this.render();
      return;
    }
    await this.runTests();
  }

  async runTests(): Promise<void> {
    try {
      await this.checkFresh();
      const run = await this.api.runTests(this.kbName);
      this.rows = run.results;
      this.error = null;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  async diagnose(): Promise<void> {
    try {
      await this.checkFresh();
      this.diagnosis = await this.api.diagnoseKb(this.kbName);
      this.kbChanged = false;
      this.error = null;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  private async checkFresh(): Promise<void> {
    const summary = await this.api.getKb(this.kbName);
    if (this.lastSource !== null && summary.source !== this.lastSource) {
      this.kbChanged = true;
    }
    this.lastSource = summary.source;
  }

  render(): void {
    this.root.textContent = '';
    if (this.error !== null) {
      const banner = document.createElement('div');
      banner.className = 'error-banner';
      banner.textContent = this.error;
      this.root.appendChild(banner);
    }

    const controls = document.createElement('div');
    controls.className = 'maintenance-controls';
    controls.appendChild(
      this.button('run-tests', 'Run tests', () => void this.runTests()),
    );
    controls.appendChild(
      this.button('diagnose-kb', 'Diagnose knowledge base', () => void this.diagnose()),
    );
    const toggleLabel = document.createElement('label');
    const toggle = document.createElement('input');
    toggle.type = 'checkbox';
    toggle.id = 'show-all-tests';
    toggle.checked = this.showAll;
    toggle.addEventListener('change', () => {
      this.showAll = toggle.checked;
      this.render();
    });
    toggleLabel.appendChild(toggle);
    toggleLabel.appendChild(document.createTextNode(' include tests without |show|'));
    controls.appendChild(toggleLabel);
    this.root.appendChild(controls);

    if (this.rows !== null) {
      this.renderRows(this.rows);
    }
    this.renderDiagnosisPanel();
  }

  private renderRows(rows: TestRow[]): void {
    const visible = this.showAll ? rows : rows.filter((r) => r.show);
    const list = document.createElement('div');
    list.className = 'test-list';
    for (const row of visible) {
      const line = document.createElement('div');
      line.className = 'test-row';
      line.dataset.name = row.name;

      const name = document.createElement('span');
      name.className = 'test-name';
      name.textContent = row.name;
      line.appendChild(name);

      const status = document.createElement('span');
      status.className = `test-status ${row.status}`;
      status.textContent = row.status;
      line.appendChild(status);

      if (row.show) {
        const flag = document.createElement('span');
        flag.className = 'show-flag';
        flag.textContent = '|show|';
        line.appendChild(flag);
      }
      list.appendChild(line);
    }
    if (visible.length < rows.length) {
      const note = document.createElement('div');
      note.className = 'hidden-count';
      note.textContent = `${rows.length - visible.length} unflagged test(s) hidden`;
      list.appendChild(note);
    }
    this.root.appendChild(list);

    const summary = document.createElement('div');
    if (rows.every((r) => r.status === 'pass')) {
      summary.className = 'suite-summary all-pass';
      summary.textContent = 'all tests pass';
    } else {
      const failed = rows.filter((r) => r.status === 'fail').length;
      summary.className = 'suite-summary has-failures';
      summary.textContent = `${failed} of ${rows.length} test(s) failing`;
    }
    this.root.appendChild(summary);
  }

  private renderDiagnosisPanel(): void {
    const panel = document.createElement('div');
    panel.className = 'diagnosis-panel';
    if (this.kbChanged && this.diagnosis !== null) {
      const prompt = document.createElement('div');
      prompt.className = 'stale-prompt';
      prompt.textContent = 'The knowledge base changed on the server; this diagnosis may be outdated. ';
      prompt.appendChild(
        this.button('diagnose-retry', 'Re-run diagnosis', () => void this.diagnose()),
      );
      panel.appendChild(prompt);
      this.root.appendChild(panel);
      return;
    }
    const diagnosis = this.diagnosis;
    if (diagnosis === null) {
      this.root.appendChild(panel);
      return;
    }
    if (diagnosis.all_pass) {
      const ok = document.createElement('div');
      ok.className = 'kb-diagnosis all-pass';
      ok.textContent = 'nothing to remove: all tests pass';
      panel.appendChild(ok);
    } else {
      diagnosis.diagnoses.forEach((group, index) => {
        const block = document.createElement('div');
        block.className = 'kb-diagnosis';
        const title = document.createElement('div');
        title.className = 'kb-diagnosis-title';
        const ids = group.constraints.map((c) => c.id).join(', ');
        title.textContent = `Diagnosis ${index + 1}: remove ${ids}`;
        block.appendChild(title);
        for (const constraint of group.constraints) {
          const line = document.createElement('div');
          line.className = 'constraint-line';
          line.textContent = `${constraint.id}: ${constraint.text}`;
          block.appendChild(line);
        }
        panel.appendChild(block);
      });
    }
    this.root.appendChild(panel);
  }

  private button(className: string, text: string, onClick: () => void): HTMLButtonElement {
    const button = document.createElement('button');
    button.type = 'button';
    button.className = className;
    button.textContent = text;
    button.addEventListener('click', onClick);
    return button;
  }
}
