// Countdown display driven by server timer_sync messages.
//
// The client interpolates between syncs but never invents time: the shown
// remaining can only count down from the last server-sent value, and expiry
// is always the server's call (the panel just hits 0 and waits).

export class CountdownClock {
  private remainingAtSync: number | null = null;
  private syncedAtMs = 0;

  /** Record a server-sent remaining time (seconds). */
  sync(remainingS: number, nowMs: number = Date.now()): void {
    this.remainingAtSync = Math.max(0, remainingS);
    this.syncedAtMs = nowMs;
  }

  clear(): void {
    this.remainingAtSync = null;
  }

  get active(): boolean {
    return this.remainingAtSync !== null;
  }

  /** Interpolated remaining seconds; never above the last sync, never below 0. */
  remaining(nowMs: number = Date.now()): number {
    if (this.remainingAtSync === null) return 0;
    const elapsed = Math.max(0, nowMs - this.syncedAtMs) / 1000;
    return Math.max(0, this.remainingAtSync - elapsed);
  }

  /** mm:ss for panel headers. */
  display(nowMs: number = Date.now()): string {
    const total = Math.ceil(this.remaining(nowMs));
    const minutes = Math.floor(total / 60);
    const seconds = total % 60;
    return `${String(minutes).padStart(2, "0")}:${String(seconds).padStart(2, "0")}`;
  }
}
