/* Results pane: consideration set, repair proposals, or a dead-end notice.
 *
 * A failed query shows a non-blocking banner and keeps the last good result
 * on screen. Item chips inside repair rows are clickable and pin the query
 * to that product; plain solution cards are not, there is nothing left to
 * explain once the requirements are satisfiable.
 */

import type { RepairProposal } from './api.js';
import type { SessionSnapshot } from './session.js';

export interface ResultsHandlers {
  onApplyRepair(changes: Record<string, string | number>): void;
  onPinItem(item: string): void;
}

export class ResultsPane {
  constructor(
    private root: HTMLElement,
    private handlers: ResultsHandlers,
  ) {}

  render(snapshot: SessionSnapshot): void {
    this.root.textContent = '';
    if (snapshot.error !== null) {
      const banner = document.createElement('div');
      banner.className = 'error-banner';
      banner.textContent = `query failed: ${snapshot.error}`;
      this.root.appendChild(banner);
    }
    if (snapshot.pending) {
      const note = document.createElement('div');
      note.className = 'pending-note';
      note.textContent = 'querying…';
      this.root.appendChild(note);
    }
    const result = snapshot.result;
    if (result === null) {
      return;
    }
    if (result.status === 'solutions') {
      this.renderSolutions(result.items);
    } else if (result.status === 'repairs') {
      this.renderRepairs(result.diagnoses);
    } else {
      const notice = document.createElement('div');
      notice.className = 'unrepairable';
      notice.textContent =
        'No repair is possible: the requirements that must be kept rule out every item.';
      this.root.appendChild(notice);
    }
  }

  private renderSolutions(items: string[]): void {
    const heading = document.createElement('h3');
    heading.textContent = `Matching items (${items.length})`;
    this.root.appendChild(heading);
    const list = document.createElement('div');
    list.className = 'item-list';
    for (const item of items) {
      const card = document.createElement('div');
      card.className = 'item-card';
      card.textContent = item;
      list.appendChild(card);
    }
    this.root.appendChild(list);
  }

  private renderRepairs(groups: { remove: string[]; repairs: RepairProposal[] }[]): void {
    const heading = document.createElement('h3');
    heading.textContent = 'No item satisfies every requirement';
    this.root.appendChild(heading);
    groups.forEach((group, index) => {
      const section = document.createElement('section');
      section.className = 'repair-group';
      const title = document.createElement('h4');
      title.textContent = `Diagnosis ${index + 1}: change ${group.remove.join(', ')}`;
      section.appendChild(title);
      for (const repair of group.repairs) {
        section.appendChild(this.buildRepairRow(repair));
      }
      this.root.appendChild(section);
    });
  }

  private buildRepairRow(repair: RepairProposal): HTMLElement {
    const row = document.createElement('div');
    row.className = 'repair-row';

    const changes = document.createElement('span');
    changes.className = 'repair-changes';
    changes.textContent = Object.entries(repair.changes)
      .map(([varName, value]) => `${varName}=${value}`)
      .join(', ');
    row.appendChild(changes);

    const apply = document.createElement('button');
    apply.type = 'button';
    apply.className = 'apply-repair';
    apply.textContent = 'Apply';
    apply.addEventListener('click', () => this.handlers.onApplyRepair(repair.changes));
    row.appendChild(apply);

    const items = document.createElement('span');
    items.className = 'repair-items';
    for (const item of repair.items) {
      const chip = document.createElement('button');
      chip.type = 'button';
      chip.className = 'item-chip';
      chip.textContent = item;
      chip.title = 'explain this item against the current requirements';
      chip.addEventListener('click', () => this.handlers.onPinItem(item));
      items.appendChild(chip);
    }
    row.appendChild(items);

    const support = document.createElement('span');
    support.className = 'repair-support';
    support.textContent = `support ${repair.support} (${Math.round(repair.support_value * 100)}%)`;
    row.appendChild(support);

    return row;
  }
}
