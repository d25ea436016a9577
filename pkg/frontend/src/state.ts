// Pure view-model logic: selection rules and the generate -> validate ->
// commit gating. Kept DOM-free so tests can drive it directly.

import type { CandidateRule, LanguageEntry, ValidateResult } from "./api.js";

export interface SelectionView {
  testParadigm: string | null;
  exemplarParadigms: Map<string, string>;
  mismatched: string[];
  canSubmit: boolean;
}

export function selectionView(
  languages: LanguageEntry[],
  testLanguage: string | null,
  exemplars: string[],
): SelectionView {
  const byName = new Map(languages.map((l) => [l.language, l]));
  const testParadigm = testLanguage ? byName.get(testLanguage)?.paradigm ?? null : null;
  const exemplarParadigms = new Map<string, string>();
  const mismatched: string[] = [];
  for (const exemplar of exemplars) {
    const paradigm = byName.get(exemplar)?.paradigm ?? "unknown";
    exemplarParadigms.set(exemplar, paradigm);
    if (testParadigm !== null && paradigm !== testParadigm) {
      mismatched.push(exemplar);
    }
  }
  return {
    testParadigm,
    exemplarParadigms,
    mismatched,
    canSubmit: testLanguage !== null && exemplars.length > 0,
  };
}

export type FlowPhase = "idle" | "generated" | "validated" | "committed";

export interface FlowState {
  phase: FlowPhase;
  candidate: CandidateRule | null;
  prompt: string | null;
  rawResponse: string | null;
  validation: ValidateResult | null;
  acceptToken: string | null;
  committedVersion: number | null;
}

export function initialFlow(): FlowState {
  return {
    phase: "idle",
    candidate: null,
    prompt: null,
    rawResponse: null,
    validation: null,
    acceptToken: null,
    committedVersion: null,
  };
}

export function withCandidate(
  state: FlowState,
  candidate: CandidateRule | null,
  prompt: string,
  rawResponse: string | null,
): FlowState {
  return {
    ...initialFlow(),
    phase: "generated",
    candidate,
    prompt,
    rawResponse,
  };
}

export function withValidation(state: FlowState, validation: ValidateResult): FlowState {
  return {
    ...state,
    phase: "validated",
    validation,
    acceptToken: validation.accept_token,
    committedVersion: null,
  };
}

export function withCommit(state: FlowState, version: number): FlowState {
  return { ...state, phase: "committed", committedVersion: version, acceptToken: null };
}

export function commitEnabled(state: FlowState): boolean {
  return (
    state.phase === "validated" &&
    state.validation?.verdict === "accept" &&
    state.acceptToken !== null &&
    state.candidate !== null
  );
}

// Wrap tagged node types in <mark> for the preview pane. The rendering is a
// pure s-expression of node types, so escaping then marking is safe.
export function highlightRendering(rendered: string, taggedTypes: string[]): string {
  let html = rendered
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
  for (const nodeType of taggedTypes) {
    html = html.split(`(${nodeType}`).join(`(<mark>${nodeType}</mark>`);
  }
  return html;
}
