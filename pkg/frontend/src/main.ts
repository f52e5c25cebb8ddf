// DOM glue for the twin-pane editor: textarea on the left, live preview
// on the right, diagnostics and answers underneath, palette on top.

import { PreviewClient } from "./client.js";
import { EditorCore } from "./controller.js";
import type { PaletteEntry } from "./palette.js";

const SERVICE_URL = (window as { EXAMDOWN_SERVICE?: string }).EXAMDOWN_SERVICE
  ?? "http://127.0.0.1:8787";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

async function boot(): Promise<void> {
  const paletteResp = await fetch("./src/palette.json");
  const palette = (await paletteResp.json()) as PaletteEntry[];

  const client = new PreviewClient(SERVICE_URL);
  const core = new EditorCore(client, { palette });

  const source = el<HTMLTextAreaElement>("source");
  const preview = el<HTMLIFrameElement>("preview");
  const diagnostics = el<HTMLUListElement>("diagnostics");
  const answers = el<HTMLUListElement>("answers");
  const banner = el<HTMLDivElement>("banner");
  const calcToggle = el<HTMLInputElement>("calc-toggle");
  const paletteBar = el<HTMLDivElement>("palette");

  for (const entry of palette) {
    const button = document.createElement("button");
    button.textContent = entry.display_label;
    button.title = entry.symbol_id;
    button.addEventListener("click", () => {
      core.insertFromPalette(entry.symbol_id);
      source.focus();
    });
    paletteBar.appendChild(button);
  }

  source.addEventListener("input", () => {
    core.onEdit(source.value, source.selectionStart ?? source.value.length);
  });
  source.addEventListener("selectionchange", () => {
    core.state.cursor = source.selectionStart ?? core.state.cursor;
  });
  calcToggle.addEventListener("change", () => core.toggleCalc(calcToggle.checked));

  core.subscribe((state) => {
    if (source.value !== state.source) {
      source.value = state.source;
      source.setSelectionRange(state.cursor, state.cursor);
    }
    preview.srcdoc = state.previewHtml;
    banner.hidden = !state.serviceDown;
    calcToggle.checked = state.calcEnabled;
    diagnostics.replaceChildren(...state.diagnostics.map((d) => {
      const li = document.createElement("li");
      li.className = `diag ${d.severity}`;
      li.textContent = `${d.line}:${d.col} ${d.severity} ${d.code} ${d.message}`;
      return li;
    }));
    answers.replaceChildren(...state.answers.map((a) => {
      const li = document.createElement("li");
      const label = a.label ? `[${a.label}]` : `#${a.index}`;
      li.textContent = `${label} ${a.spacemath}`;
      return li;
    }));
  });

  try {
    await client.health();
  } catch {
    banner.hidden = false;
  }
  core.onEdit(source.value);
}

void boot();
