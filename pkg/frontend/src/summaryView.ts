/**
 * Summary panel: one sentence per line, summary elements highlighted.
 * Only element marks are interactive; clicking plain text does nothing.
 */

import type { SummaryPayload, SummarySentence } from "./types.js";

/** Convert a byte-offset span (UTF-8) into a JS string character span. */
export function byteSpanToCharSpan(text: string, span: [number, number]): [number, number] {
  const encoder = new TextEncoder();
  let bytePos = 0;
  let startChar = -1;
  let endChar = -1;
  const chars = Array.from(text); // code points, so surrogate pairs stay whole
  for (let i = 0; i < chars.length; i++) {
    if (bytePos === span[0]) startChar = i;
    bytePos += encoder.encode(chars[i]).length;
    if (bytePos === span[1]) {
      endChar = i + 1;
      break;
    }
  }
  if (startChar < 0 || endChar < 0) {
    throw new Error(`byte span [${span}] does not land on character boundaries`);
  }
  // translate code-point indices back to UTF-16 offsets for slicing
  const toUtf16 = (cp: number) => chars.slice(0, cp).join("").length;
  return [toUtf16(startChar), toUtf16(endChar)];
}

export interface SummaryHandlers {
  onElementClick: (elementId: string, sentIdx: number) => void;
  onConceptDblClick: (cui: string) => void;
}

function renderSentenceLine(
  doc: Document,
  sentence: SummarySentence,
  payload: SummaryPayload,
  handlers: SummaryHandlers,
): HTMLElement {
  const line = doc.createElement("div");
  line.className = "sentence-line";
  line.dataset.sentIdx = String(sentence.sent_idx);

  const ordered = [...sentence.elements].sort((a, b) => a.char_span[0] - b.char_span[0]);
  let cursor = 0;
  for (const element of ordered) {
    const [start, end] = byteSpanToCharSpan(sentence.text, element.char_span);
    if (start > cursor) {
      line.appendChild(doc.createTextNode(sentence.text.slice(cursor, start)));
    }
    const mark = doc.createElement("mark");
    mark.className = "summary-element";
    mark.dataset.elementId = element.element_id;
    if (element.cuis.length > 0) mark.dataset.cui = element.cuis[0];
    mark.textContent = sentence.text.slice(start, end);
    const state = payload.elements[element.element_id];
    mark.dataset.state = state ? state.state : "NoAnnotation";
    mark.addEventListener("click", () =>
      handlers.onElementClick(element.element_id, sentence.sent_idx),
    );
    if (element.cuis.length > 0) {
      mark.addEventListener("dblclick", () => handlers.onConceptDblClick(element.cuis[0]));
    }
    line.appendChild(mark);
    cursor = end;
  }
  if (cursor < sentence.text.length) {
    line.appendChild(doc.createTextNode(sentence.text.slice(cursor)));
  }
  return line;
}

export function renderSummary(
  container: HTMLElement,
  payload: SummaryPayload,
  handlers: SummaryHandlers,
): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  for (const sentence of payload.summary.sentences) {
    container.appendChild(renderSentenceLine(doc, sentence, payload, handlers));
  }
}

/** Flip one element's highlight to its annotated state without a re-render. */
export function markElementAnnotated(container: HTMLElement, elementId: string): void {
  const mark = container.querySelector<HTMLElement>(
    `mark[data-element-id="${elementId}"]`,
  );
  if (mark) mark.dataset.state = "Annotated";
}

export function renderProgress(
  container: HTMLElement,
  annotated: number,
  total: number,
): void {
  const pct = total > 0 ? Math.round((100 * annotated) / total) : 0;
  container.textContent = `${annotated} / ${total} elements (${pct}%)`;
  container.dataset.fraction = total > 0 ? String(annotated / total) : "0";
}
