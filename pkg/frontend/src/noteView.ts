/** Note browser: date-sorted notes, section navigation, sentence anchors. */

import type { NotesPayload } from "./types.js";

export function renderNotes(container: HTMLElement, payload: NotesPayload): void {
  const doc = container.ownerDocument;
  container.textContent = "";

  const nav = doc.createElement("nav");
  nav.className = "section-nav";
  const body = doc.createElement("div");
  body.className = "notes-body";

  for (const note of payload.notes) {
    const noteEl = doc.createElement("article");
    noteEl.className = "note";
    noteEl.id = note.anchor;

    const title = doc.createElement("h2");
    title.textContent = `${note.title} — ${note.timestamp}`;
    noteEl.appendChild(title);

    for (const section of note.sections) {
      const header = doc.createElement("h3");
      header.id = section.anchor;
      header.textContent = section.header;
      noteEl.appendChild(header);

      const link = doc.createElement("a");
      link.href = `#${section.anchor}`;
      link.textContent = `${note.title} / ${section.header}`;
      link.className = "section-link";
      nav.appendChild(link);

      for (const sentence of section.sentences) {
        const span = doc.createElement("span");
        span.className = "source-sentence";
        span.id = sentence.anchor;
        span.textContent = sentence.text + " ";
        noteEl.appendChild(span);
      }
    }
    body.appendChild(noteEl);
  }
  container.appendChild(nav);
  container.appendChild(body);
}

/** Scroll the note view to a sentence anchor and flash it. */
export function jumpToAnchor(container: HTMLElement, anchor: string): boolean {
  // attribute selector, not #id: anchors may transiently duplicate across
  // re-renders and the id fast path would miss the copy in this container
  const target = container.querySelector<HTMLElement>(`[id="${anchor}"]`);
  if (!target) return false;
  if (typeof target.scrollIntoView === "function") {
    target.scrollIntoView({ block: "center" });
  }
  container
    .querySelectorAll(".jump-target")
    .forEach((el) => el.classList.remove("jump-target"));
  target.classList.add("jump-target");
  return true;
}
