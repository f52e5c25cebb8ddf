// Editor state: the source pane is the single source of truth; renders
// only ever replace the preview/diagnostics, never the source.

import type { AnswerEntry, Diagnostic } from "./client.js";

export interface EditorState {
  source: string;
  cursor: number;
  previewHtml: string;
  diagnostics: Diagnostic[];
  answers: AnswerEntry[];
  calcEnabled: boolean;
  lastRenderAt: number | null;
  serviceDown: boolean;
}

export function initialState(): EditorState {
  return {
    source: "",
    cursor: 0,
    previewHtml: "",
    diagnostics: [],
    answers: [],
    calcEnabled: true,
    lastRenderAt: null,
    serviceDown: false,
  };
}

export function withEdit(state: EditorState, source: string, cursor: number): EditorState {
  return { ...state, source, cursor };
}

export function withRenderResult(
  state: EditorState,
  html: string | undefined,
  diagnostics: Diagnostic[],
  answers: AnswerEntry[] | undefined,
  at: number,
): EditorState {
  return {
    ...state,
    previewHtml: html ?? state.previewHtml,
    diagnostics,
    answers: answers ?? state.answers,
    lastRenderAt: at,
    serviceDown: false,
  };
}

export function withServiceDown(state: EditorState): EditorState {
  // Banner only: the last good preview stays up and the source is untouched.
  return { ...state, serviceDown: true };
}

export function withCalcEnabled(state: EditorState, enabled: boolean): EditorState {
  return { ...state, calcEnabled: enabled };
}
