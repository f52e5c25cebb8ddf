import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { LatestOnly, debounce } from "../src/debounce.js";

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("fires once after the quiet period", () => {
    const calls: number[] = [];
    const fn = debounce((x: number) => calls.push(x), 150);
    fn(1);
    fn(2);
    fn(3);
    vi.advanceTimersByTime(149);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual([3]);
  });

  it("restarts the timer on every call", () => {
    const calls: number[] = [];
    const fn = debounce((x: number) => calls.push(x), 150);
    fn(1);
    vi.advanceTimersByTime(100);
    fn(2);
    vi.advanceTimersByTime(100);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(50);
    expect(calls).toEqual([2]);
  });
});

describe("LatestOnly", () => {
  it("applies only the newest response", async () => {
    const gate = new LatestOnly<string>();
    const applied: string[] = [];

    const firstId = gate.nextId();
    let resolveFirst!: (v: string) => void;
    const first = new Promise<string>((res) => { resolveFirst = res; });
    const dispatch1 = gate.dispatch(firstId, first, (v) => applied.push(v));

    const secondId = gate.nextId();
    const dispatch2 = gate.dispatch(secondId, Promise.resolve("new"),
      (v) => applied.push(v));
    await dispatch2;

    resolveFirst("stale");
    await dispatch1;

    expect(applied).toEqual(["new"]);
  });

  it("reports errors only when still current", async () => {
    const gate = new LatestOnly<string>();
    const errors: unknown[] = [];
    const id = gate.nextId();
    gate.invalidate();
    await gate.dispatch(id, Promise.reject(new Error("boom")),
      () => { throw new Error("must not apply"); },
      (err) => errors.push(err));
    expect(errors).toEqual([]);
  });
});
