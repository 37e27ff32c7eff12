/** Debounce and request-generation tagging.
 *
 * Each panel keeps at most one logical request in flight: a new edit
 * bumps the generation, and responses carrying a stale generation are
 * dropped instead of rendered.
 */

export const DEBOUNCE_MS = 250;

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number = DEBOUNCE_MS,
  timers: {
    set: (cb: () => void, ms: number) => ReturnType<typeof setTimeout>;
    clear: (h: ReturnType<typeof setTimeout>) => void;
  } = { set: (cb, ms) => setTimeout(cb, ms), clear: (h) => clearTimeout(h) },
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (handle !== undefined) timers.clear(handle);
    handle = timers.set(() => fn(...args), waitMs);
  };
}

export class RequestGate {
  private generation = 0;

  /** Mark a new request; older tokens become stale immediately. */
  begin(): number {
    this.generation += 1;
    return this.generation;
  }

  isCurrent(token: number): boolean {
    return token === this.generation;
  }
}
