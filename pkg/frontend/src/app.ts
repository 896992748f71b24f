/**
 * Application wiring: summary panel with the decision tree, note browser,
 * search panel, progress readout. Every finished decision POSTs
 * immediately (autosave); a 422 keeps the decision state on screen with
 * an inline error so nothing is lost.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  Choice,
  DecisionState,
  LEGAL_CHOICES,
  SHORTCUT_PATHS,
  choose,
  start,
  toRecord,
} from "./decisionTree.js";
import { jumpToAnchor, renderNotes } from "./noteView.js";
import { SearchPanel } from "./searchPanel.js";
import {
  markElementAnnotated,
  renderProgress,
  renderSummary,
} from "./summaryView.js";
import type { SummaryPayload } from "./types.js";

const CHOICE_LABELS: Record<Choice, string> = {
  notFound: "Not in notes",
  found: "Found in notes",
  noError: "No visible mistakes",
  incorrect: "Incorrect details",
  missing: "Missing details",
  minor: "Minor",
  critical: "Critical",
};

export interface AppElements {
  summary: HTMLElement;
  notes: HTMLElement;
  search: HTMLElement;
  decision: HTMLElement;
  progress: HTMLElement;
}

export class AnnotationApp {
  private state: DecisionState | null = null;
  private activeSentIdx = 0;
  private payload: SummaryPayload | null = null;
  private searchPanel: SearchPanel | null = null;

  constructor(
    private api: ApiClient,
    private summaryId: string,
    private el: AppElements,
  ) {}

  async boot(): Promise<void> {
    this.payload = await this.api.getSummary(this.summaryId);
    const admissionId = this.payload.summary.admission_id;
    const notes = await this.api.getNotes(admissionId);
    renderNotes(this.el.notes, notes);
    this.searchPanel = new SearchPanel(this.el.search, {
      api: this.api,
      admissionId,
      onJump: (anchor) => jumpToAnchor(this.el.notes, anchor),
    });
    this.renderSummaryPanel();
    await this.refreshProgress();
    this.el.summary.ownerDocument.addEventListener("keydown", (event) =>
      this.onKey(event as KeyboardEvent),
    );
    this.renderDecisionPanel();
  }

  private renderSummaryPanel(): void {
    if (!this.payload) return;
    renderSummary(this.el.summary, this.payload, {
      onElementClick: (elementId, sentIdx) => this.selectElement(elementId, sentIdx),
      onConceptDblClick: (cui) => void this.searchPanel?.runConceptLookup(cui),
    });
  }

  selectElement(elementId: string, sentIdx: number): void {
    this.state = start(elementId);
    this.activeSentIdx = sentIdx;
    this.renderDecisionPanel();
  }

  /** Apply one decision-tree choice; a finished state autosaves. */
  async applyChoice(choice: Choice): Promise<void> {
    if (!this.state) return;
    this.state = choose(this.state, choice);
    if (this.state.step === "Done") {
      await this.submit();
    } else {
      this.renderDecisionPanel();
    }
  }

  /** Keyboard shortcuts: digits run a whole root-to-leaf path. */
  private onKey(event: KeyboardEvent): void {
    const path = SHORTCUT_PATHS[event.key];
    if (!path || !this.state || this.state.step !== "FoundInNotes") return;
    event.preventDefault();
    void (async () => {
      for (const choice of path.slice(0, -1)) {
        this.state = choose(this.state!, choice);
      }
      await this.applyChoice(path[path.length - 1]);
    })();
  }

  private async submit(): Promise<void> {
    if (!this.state || !this.payload) return;
    const record = toRecord(
      this.state,
      this.summaryId,
      this.activeSentIdx,
      this.api.annotatorId,
    );
    try {
      await this.api.postAnnotation(record);
    } catch (err) {
      // keep the finished state visible so the annotator can retry
      this.renderDecisionPanel(
        err instanceof ApiError ? `${err.status}: ${err.detail}` : String(err),
      );
      return;
    }
    markElementAnnotated(this.el.summary, this.state.elementId);
    this.state = null;
    this.renderDecisionPanel();
    await this.refreshProgress();
  }

  private renderDecisionPanel(error?: string): void {
    const doc = this.el.decision.ownerDocument;
    this.el.decision.textContent = "";
    if (error) {
      const banner = doc.createElement("div");
      banner.className = "decision-error";
      banner.textContent = error;
      const retry = doc.createElement("button");
      retry.type = "button";
      retry.textContent = "Retry save";
      retry.addEventListener("click", () => void this.submit());
      banner.appendChild(retry);
      this.el.decision.appendChild(banner);
    }
    if (!this.state) {
      const hint = doc.createElement("p");
      hint.className = "decision-hint";
      hint.textContent = "Click a highlighted summary element to annotate it.";
      this.el.decision.appendChild(hint);
      return;
    }
    const heading = doc.createElement("p");
    heading.className = "decision-step";
    heading.dataset.step = this.state.step;
    heading.textContent = `${this.state.elementId} — ${this.state.step}`;
    this.el.decision.appendChild(heading);
    for (const choice of LEGAL_CHOICES[this.state.step]) {
      const button = doc.createElement("button");
      button.type = "button";
      button.dataset.choice = choice;
      button.textContent = CHOICE_LABELS[choice];
      button.addEventListener("click", () => void this.applyChoice(choice));
      this.el.decision.appendChild(button);
    }
  }

  async refreshProgress(): Promise<void> {
    const progress = await this.api.progress();
    renderProgress(this.el.progress, progress.annotated_elements, progress.total_elements);
  }
}

export function bootFromDom(doc: Document, baseUrl: string, summaryId: string, annotatorId: string) {
  const el: AppElements = {
    summary: doc.getElementById("summary-panel")!,
    notes: doc.getElementById("notes-panel")!,
    search: doc.getElementById("search-panel")!,
    decision: doc.getElementById("decision-panel")!,
    progress: doc.getElementById("progress-panel")!,
  };
  const app = new AnnotationApp(new ApiClient(baseUrl, annotatorId), summaryId, el);
  return app.boot().then(() => app);
}
