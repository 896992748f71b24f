/**
 * Exhaustive enumeration of the decision tree: every legal root-to-leaf
 * path, every illegal transition, and the record-shape invariant that
 * severity exists exactly for Incorrect/Missing.
 */

import { describe, expect, it } from "vitest";

import {
  Choice,
  IllegalTransition,
  LEGAL_CHOICES,
  SHORTCUT_PATHS,
  choose,
  legalPaths,
  start,
  toRecord,
} from "../src/decisionTree.js";

const ALL_CHOICES: Choice[] = [
  "notFound",
  "found",
  "noError",
  "incorrect",
  "missing",
  "minor",
  "critical",
];

function runPath(path: Choice[]) {
  let state = start("e1");
  for (const choice of path) state = choose(state, choice);
  return state;
}

describe("legal paths", () => {
  it("enumerates exactly the legal leaf outcomes", () => {
    const outcomes = legalPaths().map((path) => {
      const state = runPath(path);
      expect(state.step).toBe("Done");
      const record = toRecord(state, "s1", 0, "ann1", "2026-01-01T00:00:00");
      return `${record.category}/${record.severity}`;
    });
    expect(outcomes.sort()).toEqual(
      [
        "NotInNotes/null",
        "NoError/null",
        "Incorrect/Minor",
        "Incorrect/Critical",
        "Missing/Minor",
        "Missing/Critical",
      ].sort(),
    );
  });

  it("every legal record satisfies the category/severity invariant", () => {
    for (const path of legalPaths()) {
      const record = toRecord(runPath(path), "s1", 0, "ann1", "2026-01-01T00:00:00");
      const graded = record.category === "Incorrect" || record.category === "Missing";
      if (graded) {
        expect(["Minor", "Critical"]).toContain(record.severity);
      } else {
        expect(record.severity).toBeNull();
      }
    }
  });

  it("keyboard shortcuts cover every leaf exactly once", () => {
    const fromShortcuts = Object.values(SHORTCUT_PATHS)
      .map((path) => JSON.stringify(path))
      .sort();
    const fromEnumeration = legalPaths()
      .map((path) => JSON.stringify(path))
      .sort();
    expect(fromShortcuts).toEqual(fromEnumeration);
  });
});

describe("illegal transitions", () => {
  it("rejects every out-of-step choice", () => {
    // walk every reachable non-terminal state and try every illegal choice
    const frontier = [start("e1")];
    let checked = 0;
    while (frontier.length > 0) {
      const state = frontier.pop()!;
      if (state.step === "Done") continue;
      for (const choice of ALL_CHOICES) {
        if (LEGAL_CHOICES[state.step].includes(choice)) {
          frontier.push(choose(state, choice));
        } else {
          expect(() => choose(state, choice)).toThrow(IllegalTransition);
          checked++;
        }
      }
    }
    expect(checked).toBeGreaterThan(0);
  });

  it("severity cannot follow a NoError answer", () => {
    let state = start("e1");
    state = choose(state, "found");
    const done = choose(state, "noError");
    expect(done.step).toBe("Done");
    expect(() => choose(done, "minor")).toThrow(IllegalTransition);
  });

  it("unfinished states cannot produce records", () => {
    const state = choose(start("e1"), "found");
    expect(() => toRecord(state, "s1", 0, "ann1")).toThrow(/not finished/);
  });
});
