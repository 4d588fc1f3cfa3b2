import { ApiError, Judgment, NextItemPayload, SessionReport, TuringClient } from './api.js';

export type FlowPhase = 'loading' | 'rating' | 'exhausted' | 'closed';

interface QueuedJudgment {
  itemId: string;
  judgment: Judgment;
}

/**
 * Session state machine: fetch one item at a time, submit judgments in
 * presentation order, close, report.
 *
 * Progress is updated optimistically when a judgment is queued and rolled
 * back if the server rejects it. Failed submissions stay queued in order so
 * a flaky connection never reorders or drops judgments; duplicates are
 * resolved server-side (409) and treated as already-applied.
 */
export class RatingFlow {
  phase: FlowPhase = 'loading';
  rated = 0;
  total = 0;
  current: NextItemPayload | null = null;
  report: SessionReport | null = null;
  skipped = 0;

  private queue: QueuedJudgment[] = [];
  private inFlight = false;

  constructor(private client: TuringClient, private sessionId: string) {}

  /** Fetch the next unrated item, or flip to 'exhausted' when none remain. */
  async advance(): Promise<void> {
    let payload: NextItemPayload;
    try {
      payload = await this.client.nextItem(this.sessionId);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // closed-session race: someone sealed it; go straight to the report
        this.report = await this.client.report(this.sessionId);
        this.phase = 'closed';
        return;
      }
      throw err;
    }
    this.total = payload.total;
    if (payload.done) {
      this.current = null;
      this.phase = 'exhausted';
    } else {
      this.current = payload;
      this.phase = 'rating';
    }
  }

  /**
   * Queue a judgment for the current item and apply the optimistic progress
   * update. The queue is flushed one request at a time.
   */
  async judge(judgment: Judgment): Promise<void> {
    if (this.phase !== 'rating' || !this.current?.item_id) {
      throw new Error(`cannot judge in phase ${this.phase}`);
    }
    this.queue.push({ itemId: this.current.item_id, judgment });
    this.rated += 1;
    if (judgment === 'SKIP') {
      this.skipped += 1;
    }
    await this.flush();
    await this.advance();
  }

  /** Drain the judgment queue serially; single active request per session. */
  async flush(maxRetries = 2): Promise<void> {
    if (this.inFlight) {
      return;
    }
    this.inFlight = true;
    try {
      while (this.queue.length > 0) {
        const head = this.queue[0];
        let attempt = 0;
        for (;;) {
          try {
            await this.client.submitRating(this.sessionId, head.itemId, head.judgment);
            break;
          } catch (err) {
            if (err instanceof ApiError && err.status === 409) {
              // A 409 on the first attempt is a genuine rejection: roll back
              // the optimistic increment. A 409 on a retry means the earlier
              // attempt actually landed, so the judgment is already applied.
              if (attempt === 0) {
                this.rated -= 1;
                if (head.judgment === 'SKIP') {
                  this.skipped -= 1;
                }
              }
              break;
            }
            attempt += 1;
            if (attempt > maxRetries) {
              throw err; // network failure after retries; judgment stays queued
            }
          }
        }
        this.queue.shift();
      }
    } finally {
      this.inFlight = false;
    }
  }

  get pendingCount(): number {
    return this.queue.length;
  }

  async close(): Promise<SessionReport> {
    await this.flush();
    this.report = await this.client.closeSession(this.sessionId);
    this.phase = 'closed';
    return this.report;
  }
}
