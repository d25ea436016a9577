// DOM wiring for the studio: selection, live preview, and the gated
// generate -> validate -> commit flow. No rule logic happens here.

import { ApiError, StudioApi } from "./api.js";
import type { LanguageEntry, Pruning } from "./api.js";
import {
  commitEnabled,
  highlightRendering,
  initialFlow,
  selectionView,
  withCandidate,
  withCommit,
  withValidation,
} from "./state.js";
import type { FlowState } from "./state.js";

const TEMPLATE = `
  <header>
    <h1>Rule studio</h1>
    <span id="db-version"></span>
    <div id="error-banner" hidden></div>
  </header>
  <section id="selection">
    <h2>Exemplars and test language</h2>
    <label>Test language
      <select id="test-language"></select>
    </label>
    <span id="test-paradigm" class="paradigm"></span>
    <label>Concept
      <select id="concept">
        <option value="package">package</option>
        <option value="function">function</option>
        <option value="comment">comment</option>
      </select>
    </label>
    <fieldset id="exemplars"><legend>Exemplar languages (known)</legend></fieldset>
    <ul id="exemplar-paradigms"></ul>
    <div id="paradigm-warning" class="warning" hidden></div>
  </section>
  <section id="preview">
    <h2>Code and pruned AST preview</h2>
    <textarea id="code" rows="6" spellcheck="false"></textarea>
    <div>
      <label>Pruning
        <select id="pruning-mode">
          <option value="none">none</option>
          <option value="depth">depth</option>
          <option value="concept" selected>concept</option>
        </select>
      </label>
      <label>Depth <input id="depth" type="number" min="1" value="2"></label>
      <button id="refresh-preview">Preview</button>
    </div>
    <div id="token-count"></div>
    <pre id="rendered-ast"></pre>
  </section>
  <section id="flow">
    <h2>Generate, validate, commit</h2>
    <button id="generate" disabled>Generate rule</button>
    <pre id="prompt-view" hidden></pre>
    <pre id="candidate-view"></pre>
    <label>Validation snippet <input id="case-snippet"></label>
    <label>Expected value <input id="case-expected"></label>
    <button id="validate" disabled>Validate</button>
    <div id="verdict"></div>
    <table id="case-results"><tbody></tbody></table>
    <button id="commit" disabled>Commit</button>
    <div id="commit-result"></div>
  </section>
`;

export interface App {
  refreshPreview(): Promise<void>;
  generate(): Promise<void>;
  validate(): Promise<void>;
  commit(): Promise<void>;
  readonly flow: FlowState;
}

function el<T extends HTMLElement>(root: ParentNode, selector: string): T {
  const found = root.querySelector(selector);
  if (!found) {
    throw new Error(`missing element ${selector}`);
  }
  return found as T;
}

export async function initApp(root: HTMLElement, api: StudioApi): Promise<App> {
  root.innerHTML = TEMPLATE;

  const errorBanner = el<HTMLDivElement>(root, "#error-banner");
  const versionLabel = el<HTMLSpanElement>(root, "#db-version");
  const testSelect = el<HTMLSelectElement>(root, "#test-language");
  const testParadigm = el<HTMLSpanElement>(root, "#test-paradigm");
  const conceptSelect = el<HTMLSelectElement>(root, "#concept");
  const exemplarBox = el<HTMLFieldSetElement>(root, "#exemplars");
  const exemplarParadigms = el<HTMLUListElement>(root, "#exemplar-paradigms");
  const warning = el<HTMLDivElement>(root, "#paradigm-warning");
  const codeArea = el<HTMLTextAreaElement>(root, "#code");
  const pruningMode = el<HTMLSelectElement>(root, "#pruning-mode");
  const depthInput = el<HTMLInputElement>(root, "#depth");
  const previewButton = el<HTMLButtonElement>(root, "#refresh-preview");
  const tokenLabel = el<HTMLDivElement>(root, "#token-count");
  const renderedPre = el<HTMLPreElement>(root, "#rendered-ast");
  const generateButton = el<HTMLButtonElement>(root, "#generate");
  const promptView = el<HTMLPreElement>(root, "#prompt-view");
  const candidateView = el<HTMLPreElement>(root, "#candidate-view");
  const caseSnippet = el<HTMLInputElement>(root, "#case-snippet");
  const caseExpected = el<HTMLInputElement>(root, "#case-expected");
  const validateButton = el<HTMLButtonElement>(root, "#validate");
  const verdictLabel = el<HTMLDivElement>(root, "#verdict");
  const caseResults = el<HTMLTableElement>(root, "#case-results");
  const commitButton = el<HTMLButtonElement>(root, "#commit");
  const commitResult = el<HTMLDivElement>(root, "#commit-result");

  let languages: LanguageEntry[] = [];
  let dbVersion = 0;
  let flow = initialFlow();

  function showError(err: unknown): void {
    const message =
      err instanceof ApiError ? `${err.status} ${err.code}: ${err.message}` : String(err);
    errorBanner.textContent = message;
    errorBanner.hidden = false;
  }

  function clearError(): void {
    errorBanner.hidden = true;
    errorBanner.textContent = "";
  }

  function selectedExemplars(): string[] {
    return Array.from(
      exemplarBox.querySelectorAll<HTMLInputElement>("input[type=checkbox]:checked"),
    ).map((box) => box.value);
  }

  function pruning(): Pruning {
    const mode = pruningMode.value as Pruning["mode"];
    if (mode === "depth") {
      return { mode, depth: Number(depthInput.value) || 1 };
    }
    if (mode === "concept") {
      return { mode, concepts: [conceptSelect.value] };
    }
    return { mode: "none" };
  }

  function renderSelection(): void {
    const view = selectionView(languages, testSelect.value || null, selectedExemplars());
    testParadigm.textContent = view.testParadigm ?? "";
    exemplarParadigms.innerHTML = "";
    for (const [language, paradigm] of view.exemplarParadigms) {
      const item = document.createElement("li");
      item.textContent = `${language}: ${paradigm}`;
      exemplarParadigms.appendChild(item);
    }
    if (view.mismatched.length > 0) {
      warning.hidden = false;
      warning.textContent =
        `Cross-paradigm exemplars: ${view.mismatched.join(", ")} ` +
        `(test language is ${view.testParadigm})`;
    } else {
      warning.hidden = true;
      warning.textContent = "";
    }
    generateButton.disabled = !view.canSubmit;
  }

  function renderFlow(): void {
    candidateView.textContent = flow.candidate
      ? JSON.stringify(flow.candidate, null, 2)
      : "";
    promptView.hidden = flow.prompt === null;
    promptView.textContent = flow.prompt ?? "";
    validateButton.disabled = flow.candidate === null;
    if (flow.validation) {
      verdictLabel.textContent = `verdict: ${flow.validation.verdict}`;
      const body = caseResults.querySelector("tbody");
      if (body) {
        body.innerHTML = "";
        for (const result of flow.validation.cases) {
          const row = document.createElement("tr");
          const status = result.matched ? "ok" : result.error ?? `got ${result.actual}`;
          row.innerHTML = `<td>${result.snippet}</td><td>${result.expected}</td><td>${status}</td>`;
          body.appendChild(row);
        }
      }
    } else {
      verdictLabel.textContent = "";
    }
    commitButton.disabled = !commitEnabled(flow);
    commitResult.textContent =
      flow.committedVersion !== null
        ? `committed; database version ${flow.committedVersion}`
        : "";
  }

  async function refreshVersion(): Promise<void> {
    dbVersion = await api.rulesVersion();
    versionLabel.textContent = `rule database v${dbVersion}`;
  }

  async function refreshPreview(): Promise<void> {
    clearError();
    if (!testSelect.value || !codeArea.value) {
      return;
    }
    try {
      const preview = await api.parsePreview(codeArea.value, testSelect.value, pruning());
      tokenLabel.textContent =
        `tokens: ${preview.token_count} (unpruned ${preview.unpruned_token_count})`;
      renderedPre.innerHTML = highlightRendering(
        preview.rendered_ast,
        preview.tagged_node_types,
      );
    } catch (err) {
      showError(err);
    }
  }

  async function generate(): Promise<void> {
    clearError();
    try {
      const result = await api.generate({
        test_language: testSelect.value,
        concept: conceptSelect.value,
        exemplars: selectedExemplars(),
        pruning: pruning(),
        test_snippet: codeArea.value || undefined,
      });
      flow = withCandidate(flow, result.candidate_rule, result.prompt, result.response);
      if (!result.candidate_rule && result.parse_error) {
        showError(new ApiError(200, "unparseable_response", result.parse_error));
      }
    } catch (err) {
      showError(err);
    }
    renderFlow();
  }

  async function validate(): Promise<void> {
    clearError();
    if (!flow.candidate) {
      return;
    }
    try {
      const result = await api.validate(flow.candidate, [
        { snippet: caseSnippet.value, expected: caseExpected.value },
      ]);
      flow = withValidation(flow, result);
    } catch (err) {
      showError(err);
    }
    renderFlow();
  }

  async function commit(): Promise<void> {
    clearError();
    if (!commitEnabled(flow) || !flow.candidate || !flow.acceptToken) {
      return;
    }
    try {
      const version = await api.commit(flow.candidate, dbVersion, flow.acceptToken);
      flow = withCommit(flow, version);
      await refreshVersion();
    } catch (err) {
      showError(err); // e.g. 409 stale_version
    }
    renderFlow();
  }

  languages = await api.languages();
  for (const entry of languages) {
    const option = document.createElement("option");
    option.value = entry.language;
    option.textContent = entry.language;
    testSelect.appendChild(option);
    if (entry.known) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = entry.language;
      box.addEventListener("change", renderSelection);
      label.appendChild(box);
      label.appendChild(document.createTextNode(entry.language));
      exemplarBox.appendChild(label);
    }
  }
  await refreshVersion();

  testSelect.addEventListener("change", renderSelection);
  pruningMode.addEventListener("change", refreshPreview);
  depthInput.addEventListener("change", refreshPreview);
  codeArea.addEventListener("input", refreshPreview);
  previewButton.addEventListener("click", refreshPreview);
  generateButton.addEventListener("click", generate);
  validateButton.addEventListener("click", validate);
  commitButton.addEventListener("click", commit);

  renderSelection();
  renderFlow();

  return {
    refreshPreview,
    generate,
    validate,
    commit,
    get flow() {
      return flow;
    },
  };
}
