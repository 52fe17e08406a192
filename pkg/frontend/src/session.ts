/* Recommendation session state.
 *
 * The selections array IS the preference order: the service treats request
 * array order as requirement entry order, so selections are kept in
 * first-selection order. Changing an already-selected variable updates the
 * value in place without promoting it; clearing one removes it without
 * renumbering the rest.
 *
 * Queries are debounced, and at most one request is in flight. Every
 * mutation bumps a sequence number; a response whose sequence no longer
 * matches was superseded by newer input and is discarded, triggering an
 * immediate re-query with the current selections.
 */

import type { ApiClient, RecommendationResponse, RequirementEntry } from './api.js';

export const DEBOUNCE_MS = 250;

export interface Selection {
  var: string;
  value: string | number;
}

export interface SessionSnapshot {
  selections: Selection[];
  result: RecommendationResponse | null;
  error: string | null;
  pending: boolean;
}

export type SessionListener = (snapshot: SessionSnapshot) => void;

export class RecommendSession {
  private sels: Selection[] = [];
  private result: RecommendationResponse | null = null;
  private error: string | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inputSeq = 0;
  private inFlight = false;
  private pin: string | null = null;
  private disposed = false;
  private waiters: Array<() => void> = [];

  constructor(
    private api: ApiClient,
    private kbName: string,
    private listener: SessionListener = () => {},
    private debounceMs: number = DEBOUNCE_MS,
  ) {}

  selections(): Selection[] {
    return this.sels.map((s) => ({ ...s }));
  }

  snapshot(): SessionSnapshot {
    return {
      selections: this.selections(),
      result: this.result,
      error: this.error,
      pending: this.inFlight || this.timer !== null,
    };
  }

  /** Select or update a value; first selection of a variable appends it. */
  setSelection(varName: string, value: string | number): void {
    const existing = this.sels.find((s) => s.var === varName);
    if (existing !== undefined) {
      if (existing.value === value) {
        return;
      }
      existing.value = value;
    } else {
      this.sels.push({ var: varName, value });
    }
    this.inputSeq += 1;
    this.schedule();
    this.notify();
  }

  /** Drop a selection; the relative order of the others is untouched. */
  clearSelection(varName: string): void {
    const index = this.sels.findIndex((s) => s.var === varName);
    if (index === -1) {
      return;
    }
    this.sels.splice(index, 1);
    this.inputSeq += 1;
    this.schedule();
    this.notify();
  }

  /**
   * Rewrite the selections named by a repair proposal in place. Variables
   * already selected keep their entry position; new ones are appended.
   * Fires immediately: a repair click is a deliberate action, not typing.
   */
  applyRepair(changes: Record<string, string | number>): void {
    for (const [varName, value] of Object.entries(changes)) {
      const existing = this.sels.find((s) => s.var === varName);
      if (existing !== undefined) {
        existing.value = value;
      } else {
        this.sels.push({ var: varName, value });
      }
    }
    this.inputSeq += 1;
    this.notify();
    this.fireNow();
  }

  /** Query with the current selections pinned to one product (one-shot). */
  pinItem(item: string): void {
    this.pin = item;
    this.inputSeq += 1;
    this.fireNow();
  }

  /** Query immediately with whatever is currently selected. */
  queryNow(): void {
    this.fireNow();
  }

  /** Resolves once no query is scheduled, in flight, or about to refire. */
  settled(): Promise<void> {
    if (this.isSettled()) {
      return Promise.resolve();
    }
    return new Promise((resolve) => this.waiters.push(resolve));
  }

  dispose(): void {
    this.disposed = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.drainWaiters();
  }

  private isSettled(): boolean {
    return !this.inFlight && this.timer === null;
  }

  private schedule(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      this.fire();
    }, this.debounceMs);
  }

  private fireNow(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.fire();
  }

  private fire(): void {
    if (this.disposed || this.inFlight) {
      // An in-flight response with a stale sequence refires on settle.
      return;
    }
    const seq = this.inputSeq;
    const item = this.pin;
    this.pin = null;
    const requirements: RequirementEntry[] = this.sels.map((s) => ({
      var: s.var,
      value: s.value,
    }));
    this.inFlight = true;
    this.notify();
    this.api
      .recommend(this.kbName, requirements, item === null ? {} : { item })
      .then(
        (result) => this.settle(seq, result, null),
        (err) => this.settle(seq, null, err instanceof Error ? err.message : String(err)),
      );
  }

  private settle(
    seq: number,
    result: RecommendationResponse | null,
    error: string | null,
  ): void {
    this.inFlight = false;
    if (this.disposed) {
      this.drainWaiters();
      return;
    }
    if (seq !== this.inputSeq) {
      // Superseded by newer input: discard and re-query right away.
      this.fire();
      return;
    }
    if (result !== null) {
      this.result = result;
      this.error = null;
    } else {
      // Keep the last good result visible behind the error banner.
      this.error = error;
    }
    this.notify();
    if (this.isSettled()) {
      this.drainWaiters();
    }
  }

  private drainWaiters(): void {
    const waiters = this.waiters;
    this.waiters = [];
    for (const resolve of waiters) {
      resolve();
    }
  }

  private notify(): void {
    this.listener(this.snapshot());
  }
}
