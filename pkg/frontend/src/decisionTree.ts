/**
 * The annotation decision tree as a state machine.
 *
 * Every annotation starts at FoundInNotes ("can you find this summary
 * element in the notes?"). A "not found" answer finishes immediately as
 * NotInNotes; otherwise the usage check either finishes clean (NoError)
 * or routes Incorrect/Missing through the severity check. The machine is
 * the only way the UI can build an AnnotationRecord, so illegal
 * category/severity combinations are unrepresentable.
 */

import type { AnnotationRecord, Category, Severity } from "./types.js";

export type Step = "FoundInNotes" | "UsageCheck" | "SeverityCheck" | "Done";

export type Choice =
  | "notFound"
  | "found"
  | "noError"
  | "incorrect"
  | "missing"
  | "minor"
  | "critical";

export interface DecisionState {
  elementId: string;
  step: Step;
  pending: { category: Category | null; severity: Severity | null };
}

export class IllegalTransition extends Error {
  constructor(step: Step, choice: Choice) {
    super(`choice "${choice}" is not legal at step ${step}`);
  }
}

export function start(elementId: string): DecisionState {
  return { elementId, step: "FoundInNotes", pending: { category: null, severity: null } };
}

/** Choices legal at each step (drives both the buttons and the guard). */
export const LEGAL_CHOICES: Record<Step, Choice[]> = {
  FoundInNotes: ["notFound", "found"],
  UsageCheck: ["noError", "incorrect", "missing"],
  SeverityCheck: ["minor", "critical"],
  Done: [],
};

export function choose(state: DecisionState, choice: Choice): DecisionState {
  if (!LEGAL_CHOICES[state.step].includes(choice)) {
    throw new IllegalTransition(state.step, choice);
  }
  const next = (
    step: Step,
    category: Category | null = state.pending.category,
    severity: Severity | null = state.pending.severity,
  ): DecisionState => ({ elementId: state.elementId, step, pending: { category, severity } });

  switch (state.step) {
    case "FoundInNotes":
      return choice === "notFound" ? next("Done", "NotInNotes", null) : next("UsageCheck");
    case "UsageCheck":
      if (choice === "noError") return next("Done", "NoError", null);
      return next("SeverityCheck", choice === "incorrect" ? "Incorrect" : "Missing");
    case "SeverityCheck":
      return next("Done", state.pending.category, choice === "minor" ? "Minor" : "Critical");
    default:
      throw new IllegalTransition(state.step, choice);
  }
}

/** Build the record; only a finished state can produce one. */
export function toRecord(
  state: DecisionState,
  summaryId: string,
  sentIdx: number,
  annotatorId: string,
  wallTime: string = new Date().toISOString(),
): AnnotationRecord {
  if (state.step !== "Done" || state.pending.category === null) {
    throw new Error(`element ${state.elementId}: decision not finished`);
  }
  return {
    element_id: state.elementId,
    summary_id: summaryId,
    sent_idx: sentIdx,
    category: state.pending.category,
    severity: state.pending.severity,
    annotator_id: annotatorId,
    wall_time: wallTime,
  };
}

/** Every legal root-to-leaf choice sequence, in a fixed order. */
export function legalPaths(): Choice[][] {
  const paths: Choice[][] = [];
  const walk = (state: DecisionState, trail: Choice[]) => {
    if (state.step === "Done") {
      paths.push(trail);
      return;
    }
    for (const choice of LEGAL_CHOICES[state.step]) {
      walk(choose(state, choice), [...trail, choice]);
    }
  };
  walk(start("_"), []);
  return paths;
}

/** One-keystroke shortcuts: each runs a full path and autosaves. */
export const SHORTCUT_PATHS: Record<string, Choice[]> = {
  "1": ["notFound"],
  "2": ["found", "noError"],
  "3": ["found", "incorrect", "minor"],
  "4": ["found", "incorrect", "critical"],
  "5": ["found", "missing", "minor"],
  "6": ["found", "missing", "critical"],
};
