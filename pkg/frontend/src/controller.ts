// Editor core, DOM-free: debounced renders, stale-response discard, at
// most one request in flight (a newer edit queues a fresh render behind
// the current one instead of piling up).

import { PreviewClient } from "./client.js";
import { LatestOnly, debounce } from "./debounce.js";
import { PaletteEntry, insertFromPalette } from "./palette.js";
import {
  EditorState, initialState, withCalcEnabled, withEdit, withRenderResult,
  withServiceDown,
} from "./state.js";

export type Listener = (state: EditorState) => void;

export interface EditorOptions {
  debounceMs?: number;
  palette?: PaletteEntry[];
  now?: () => number;
}

export class EditorCore {
  state: EditorState = initialState();

  private readonly gate = new LatestOnly<void>();
  private readonly listeners: Listener[] = [];
  private readonly scheduleRender: () => void;
  private readonly palette: PaletteEntry[];
  private readonly now: () => number;
  private inFlight = false;
  private rerenderQueued = false;

  constructor(private readonly client: PreviewClient, options: EditorOptions = {}) {
    this.palette = options.palette ?? [];
    this.now = options.now ?? Date.now;
    this.scheduleRender = debounce(() => {
      void this.renderNow();
    }, options.debounceMs ?? 150);
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  onEdit(source: string, cursor?: number): void {
    this.state = withEdit(this.state, source, cursor ?? source.length);
    this.emit();
    this.scheduleRender();
  }

  insertFromPalette(symbolId: string): void {
    const result = insertFromPalette(
      this.palette, this.state.source, this.state.cursor, symbolId);
    this.onEdit(result.source, result.cursor);
  }

  toggleCalc(enabled?: boolean): void {
    this.state = withCalcEnabled(
      this.state, enabled === undefined ? !this.state.calcEnabled : enabled);
    this.emit();
    this.scheduleRender();
  }

  async renderNow(): Promise<void> {
    if (this.inFlight) {
      this.rerenderQueued = true;
      return;
    }
    this.inFlight = true;
    const id = this.gate.nextId();
    const request = {
      source: this.state.source,
      calc_enabled: this.state.calcEnabled,
      want: ["html", "diagnostics", "answers"] as ("html" | "diagnostics" | "answers")[],
    };
    try {
      const resp = await this.client.render(request);
      if (this.gate.isCurrent(id)) {
        this.state = withRenderResult(
          this.state, resp.html, resp.diagnostics, resp.answers, this.now());
        this.emit();
      }
    } catch {
      if (this.gate.isCurrent(id)) {
        this.state = withServiceDown(this.state);
        this.emit();
      }
    } finally {
      this.inFlight = false;
      if (this.rerenderQueued) {
        this.rerenderQueued = false;
        void this.renderNow();
      }
    }
  }
}
