// Debounce plus latest-response-wins dispatch.
//
// The editor fires a render at most once per quiet period, and a response
// is applied only if no newer request has been issued since (stale
// responses are discarded, so the preview is always monotone).

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, ms);
  };
}

export class LatestOnly<T> {
  private lastId = 0;

  nextId(): number {
    return ++this.lastId;
  }

  isCurrent(id: number): boolean {
    return id === this.lastId;
  }

  // Apply the callback only when this dispatch is still the newest one.
  async dispatch(id: number, fired: Promise<T>, apply: (value: T) => void,
                 onError?: (err: unknown) => void): Promise<void> {
    try {
      const value = await fired;
      if (this.isCurrent(id)) {
        apply(value);
      }
    } catch (err) {
      if (this.isCurrent(id) && onError) {
        onError(err);
      }
    }
  }

  invalidate(): void {
    this.lastId++;
  }
}
