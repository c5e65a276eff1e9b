/** Debounced request scheduling with stale-response discarding.
 *
 * Each burst of control changes collapses into one request after the
 * debounce window. Requests carry monotonically increasing sequence
 * numbers; a response is delivered only if no newer request has been
 * dispatched since, so out-of-order completions can never paint stale
 * results. Failures keep the state and expose a retry.
 */

export interface SchedulerCallbacks<S, R> {
  onResult: (state: S, result: R) => void;
  onError?: (state: S, error: unknown, retry: () => void) => void;
}

export class PreferenceScheduler<S, R> {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private seq = 0;
  private pendingState: S | null = null;
  private lastDispatched: S | null = null;
  dispatched = 0;

  constructor(
    private readonly send: (state: S) => Promise<R>,
    private readonly callbacks: SchedulerCallbacks<S, R>,
    private readonly debounceMs = 150,
  ) {}

  /** Register a control change; the request fires after the burst settles. */
  submit(state: S): void {
    this.pendingState = state;
    if (this.timer) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      if (this.pendingState !== null) {
        const state = this.pendingState;
        this.pendingState = null;
        this.dispatch(state);
      }
    }, this.debounceMs);
  }

  /** Re-send the most recently dispatched state (retry affordance). */
  retry(): void {
    if (this.lastDispatched !== null) this.dispatch(this.lastDispatched);
  }

  /** Bypass the debounce window (initial load, programmatic refresh). */
  flush(state: S): void {
    if (this.timer) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.pendingState = null;
    this.dispatch(state);
  }

  private dispatch(state: S): void {
    const mySeq = ++this.seq;
    this.lastDispatched = state;
    this.dispatched += 1;
    this.send(state).then(
      (result) => {
        if (mySeq === this.seq) this.callbacks.onResult(state, result);
      },
      (error) => {
        if (mySeq === this.seq && this.callbacks.onError) {
          this.callbacks.onError(state, error, () => this.retry());
        }
      },
    );
  }
}
