/**
 * Keyword search panel and concept lookups. Hits render as a clickable
 * list; clicking jumps the note view to the matching sentence. Network
 * failures surface as a retry banner that re-runs the last request.
 */

import type { ApiClient } from "./api.js";
import type { ConceptMention, SearchHit } from "./types.js";

export interface SearchPanelOptions {
  api: ApiClient;
  admissionId: string;
  onJump: (anchor: string) => void;
}

export class SearchPanel {
  readonly root: HTMLElement;
  private input: HTMLInputElement;
  private results: HTMLElement;
  private banner: HTMLElement;
  private lastAction: (() => Promise<void>) | null = null;

  constructor(
    container: HTMLElement,
    private options: SearchPanelOptions,
  ) {
    const doc = container.ownerDocument;
    this.root = container;
    container.textContent = "";

    const form = doc.createElement("form");
    form.className = "search-form";
    this.input = doc.createElement("input");
    this.input.type = "search";
    this.input.placeholder = "search notes";
    const button = doc.createElement("button");
    button.type = "submit";
    button.textContent = "Search";
    form.append(this.input, button);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.runSearch(this.input.value);
    });

    this.banner = doc.createElement("div");
    this.banner.className = "retry-banner";
    this.banner.hidden = true;

    this.results = doc.createElement("ul");
    this.results.className = "search-results";

    container.append(form, this.banner, this.results);
  }

  async runSearch(query: string): Promise<void> {
    this.lastAction = () => this.runSearch(query);
    await this.guard(async () => {
      const res = await this.options.api.search(this.options.admissionId, query);
      this.renderHits(res.hits);
    });
  }

  async runConceptLookup(cui: string): Promise<void> {
    this.lastAction = () => this.runConceptLookup(cui);
    await this.guard(async () => {
      const res = await this.options.api.conceptMentions(this.options.admissionId, cui);
      this.renderMentions(res.cui, res.mentions);
    });
  }

  private async guard(action: () => Promise<void>): Promise<void> {
    try {
      await action();
      this.banner.hidden = true;
    } catch (err) {
      this.showRetryBanner(err instanceof Error ? err.message : String(err));
    }
  }

  private showRetryBanner(message: string): void {
    const doc = this.root.ownerDocument;
    this.banner.hidden = false;
    this.banner.textContent = `request failed: ${message} `;
    const retry = doc.createElement("button");
    retry.type = "button";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      if (this.lastAction) void this.lastAction();
    });
    this.banner.appendChild(retry);
  }

  private renderHits(hits: SearchHit[]): void {
    const doc = this.root.ownerDocument;
    this.results.textContent = "";
    if (hits.length === 0) {
      const empty = doc.createElement("li");
      empty.className = "no-results";
      empty.textContent = "no matches";
      this.results.appendChild(empty);
      return;
    }
    for (const hit of hits) {
      this.results.appendChild(this.hitItem(hit.anchor, hit.note_title, hit.snippet));
    }
  }

  private renderMentions(cui: string, mentions: ConceptMention[]): void {
    const doc = this.root.ownerDocument;
    this.results.textContent = "";
    if (mentions.length === 0) {
      const empty = doc.createElement("li");
      empty.className = "no-results";
      empty.textContent = `no mentions of ${cui}`;
      this.results.appendChild(empty);
      return;
    }
    for (const mention of mentions) {
      this.results.appendChild(this.hitItem(mention.anchor, cui, mention.text));
    }
  }

  private hitItem(anchor: string, label: string, text: string): HTMLElement {
    const doc = this.root.ownerDocument;
    const item = doc.createElement("li");
    item.className = "search-hit";
    item.dataset.anchor = anchor;
    const strong = doc.createElement("strong");
    strong.textContent = label + ": ";
    item.append(strong, doc.createTextNode(text));
    item.addEventListener("click", () => this.options.onJump(anchor));
    return item;
  }
}
