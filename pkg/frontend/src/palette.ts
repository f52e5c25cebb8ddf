// Text-inserting symbol palette: every button writes plain Space Math at
// the caret, so the document stays plain text end to end.

export interface PaletteEntry {
  symbol_id: string;
  insert_text: string;
  caret_offset: number;
  display_label: string;
}

export interface Insertion {
  source: string;
  cursor: number;
}

export function insertFromPalette(
  table: PaletteEntry[],
  source: string,
  cursor: number,
  symbolId: string,
): Insertion {
  const entry = table.find((e) => e.symbol_id === symbolId);
  if (!entry) {
    return { source, cursor };
  }
  const at = Math.max(0, Math.min(cursor, source.length));
  const next = source.slice(0, at) + entry.insert_text + source.slice(at);
  return { source: next, cursor: at + entry.caret_offset };
}
