import { describe, expect, it } from 'vitest';

import { DEBOUNCE_MS, RequestGate, debounce } from '../src/latest.js';

/** Manual timer harness so debounce tests need no real clock. */
function manualTimers() {
  let nextId = 1;
  const pending = new Map<number, { cb: () => void; due: number }>();
  let now = 0;
  return {
    set: (cb: () => void, ms: number) => {
      const id = nextId++;
      pending.set(id, { cb, due: now + ms });
      return id as unknown as ReturnType<typeof setTimeout>;
    },
    clear: (h: ReturnType<typeof setTimeout>) => {
      pending.delete(h as unknown as number);
    },
    advance: (ms: number) => {
      now += ms;
      for (const [id, timer] of [...pending]) {
        if (timer.due <= now) {
          pending.delete(id);
          timer.cb();
        }
      }
    },
  };
}

describe('debounce', () => {
  it('fires once after the quiet period, with the last arguments', () => {
    const timers = manualTimers();
    const calls: number[] = [];
    const fn = debounce((x: number) => calls.push(x), DEBOUNCE_MS, timers);
    fn(1);
    timers.advance(100);
    fn(2);
    timers.advance(100);
    fn(3);
    expect(calls).toEqual([]);
    timers.advance(DEBOUNCE_MS);
    expect(calls).toEqual([3]);
  });

  it('uses the 250 ms interval by default', () => {
    expect(DEBOUNCE_MS).toBe(250);
  });
});

describe('request generation tagging', () => {
  it('marks superseded requests stale', () => {
    const gate = new RequestGate();
    const first = gate.begin();
    const second = gate.begin();
    expect(gate.isCurrent(first)).toBe(false);
    expect(gate.isCurrent(second)).toBe(true);
  });

  it('a stale response is discarded, the current one rendered', async () => {
    const gate = new RequestGate();
    const rendered: string[] = [];
    const respond = (token: number, payload: string) => {
      if (gate.isCurrent(token)) rendered.push(payload);
    };
    const slow = gate.begin();
    const fast = gate.begin();
    respond(fast, 'fresh');
    respond(slow, 'stale'); // arrives late; must be dropped
    expect(rendered).toEqual(['fresh']);
  });
});
