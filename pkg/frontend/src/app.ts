/** DOM wiring.  All state lives on the server; this file only renders the
 * pure view models and forwards form input to the API client. */

import { ApiClient, ApiError } from "./api.js";
import {
    CONTEXT_KINDS,
    SEMANTIC_FUNCTIONS,
    buildObject,
    composerKind,
    composerProblems,
} from "./model.js";
import { bindingCriterion, insertCriterion } from "./query.js";
import { flattenGraph, traceView } from "./view.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

function banner(message: string, kind: "error" | "ok" = "error"): void {
    const box = el<HTMLDivElement>("banner");
    box.textContent = message;
    box.className = message ? `banner ${kind}` : "banner";
}

function describeError(error: unknown): string {
    if (error instanceof ApiError) {
        const position = error.detail["position"];
        const where = typeof position === "number" ? ` (position ${position})` : "";
        return `${error.code} : ${error.message}${where}`;
    }
    return String(error);
}

// -- documents and the annotation tree --------------------------------------

let currentDocument: string | null = null;
let serverVersion = 0;

async function refreshDocuments(): Promise<void> {
    const data = await api.listDocuments();
    serverVersion = data.version;
    const list = el<HTMLSelectElement>("document-select");
    list.innerHTML = "";
    for (const doc of data.documents) {
        const option = document.createElement("option");
        option.value = doc.id;
        option.textContent = `${doc.id} — ${doc.title || "(sans titre)"} [${doc.tier}]`;
        list.append(option);
    }
    if (data.documents.length && !currentDocument) {
        currentDocument = data.documents[0].id;
    }
    if (currentDocument) {
        list.value = currentDocument;
        await refreshTree();
    } else {
        el<HTMLDivElement>("tree").textContent = "Aucun document.";
    }
}

async function refreshTree(): Promise<void> {
    if (!currentDocument) return;
    try {
        const graph = await api.graph(currentDocument);
        serverVersion = graph.version;
        const rows = flattenGraph(graph);
        const tree = el<HTMLDivElement>("tree");
        tree.innerHTML = "";
        if (!rows.length) {
            tree.textContent = "Document sans annotation — utilisez le composeur ci-dessous.";
            return;
        }
        for (const row of rows) {
            const div = document.createElement("div");
            div.className = "tree-row";
            div.style.marginLeft = `${row.depth * 1.5}rem`;
            const head = document.createElement("div");
            head.className = "tree-head";
            head.textContent = `${row.record.id} · ${row.record.semantic_function} · ${row.record.annotator}`;
            div.append(head);
            for (const unit of row.units) {
                const line = document.createElement("div");
                line.className = "tree-unit";
                line.textContent = unit;
                div.append(line);
            }
            tree.append(div);
        }
    } catch (error) {
        banner(describeError(error));
    }
}

// -- composer -----------------------------------------------------------------

function composerState() {
    return {
        attribute: el<HTMLInputElement>("compose-attribute").value,
        valuesText: el<HTMLInputElement>("compose-values").value,
    };
}

function refreshComposer(): void {
    const problems = composerProblems(composerState());
    const indicator = el<HTMLSpanElement>("compose-kind");
    const kind = composerKind(composerState());
    indicator.textContent = kind === "explicit" ? "objet explicite"
        : kind === "implicit" ? "objet implicite" : "objet vide";
    indicator.className = `kind ${kind}`;
    el<HTMLUListElement>("compose-problems").innerHTML =
        problems.map((p) => `<li>${p}</li>`).join("");
    el<HTMLButtonElement>("compose-submit").disabled = problems.length > 0;
}

async function submitComposer(event: Event): Promise<void> {
    event.preventDefault();
    if (!currentDocument) {
        banner("choisir d'abord un document");
        return;
    }
    const state = composerState();
    if (composerProblems(state).length) return;
    const doc = el<HTMLSelectElement>("document-select");
    const tierLabel = doc.selectedOptions[0]?.textContent ?? "";
    const tier = tierLabel.includes("[secondary]") ? "secondary" : "primary";
    try {
        await api.createAnnotation({
            context: {
                kind: el<HTMLSelectElement>("compose-context").value,
                note: el<HTMLInputElement>("compose-note").value,
            },
            target: { tier, id: currentDocument },
            annotator: el<HTMLInputElement>("compose-annotator").value || "ui",
            semantic_function: el<HTMLSelectElement>("compose-function").value,
            object: buildObject(state),
        }, serverVersion);
        banner("annotation créée", "ok");
        el<HTMLInputElement>("compose-attribute").value = "";
        el<HTMLInputElement>("compose-values").value = "";
        el<HTMLInputElement>("compose-note").value = "";
        refreshComposer();
        await refreshTree();
    } catch (error) {
        if (error instanceof ApiError && error.code === "VersionMismatch") {
            banner("le magasin a changé entre-temps ; rechargement de l'arbre", "error");
            await refreshDocuments();
            return;
        }
        banner(describeError(error));
    }
}

// -- search -------------------------------------------------------------------

async function runSearch(event?: Event): Promise<void> {
    event?.preventDefault();
    const q = el<HTMLInputElement>("search-query").value;
    const strict = el<HTMLInputElement>("search-strict").checked;
    try {
        const data = await api.search(q, strict);
        serverVersion = data.version;
        banner("");
        const results = el<HTMLUListElement>("search-results");
        results.innerHTML = "";
        for (const id of data.ids) {
            const item = document.createElement("li");
            item.textContent = id;
            results.append(item);
        }
        if (!data.ids.length) {
            results.innerHTML = "<li class='empty'>aucune annotation</li>";
        }
        renderTrace(data.trace);
    } catch (error) {
        banner(describeError(error));
    }
}

function renderTrace(trace: import("./model.js").TraceWire | null): void {
    const panel = el<HTMLDivElement>("trace-panel");
    panel.innerHTML = "";
    if (!trace) {
        panel.textContent = "Recherche classique : pas de réécriture.";
        return;
    }
    const view = traceView(trace);
    for (const token of view.tokens) {
        const row = document.createElement("div");
        row.className = "trace-row";
        const name = document.createElement("span");
        name.className = "trace-token";
        name.textContent = token.dropped ? `${token.token} (ignoré)` : token.token;
        row.append(name);
        for (const chip of token.chips) {
            const button = document.createElement("button");
            button.type = "button";
            button.className = "chip";
            button.textContent = `${chip.attribute} ← ${chip.annotation}`;
            button.title = `valeurs stockées : ${chip.storedValues}`;
            button.addEventListener("click", () => {
                const box = el<HTMLInputElement>("search-query");
                const criterion = bindingCriterion(chip.token, {
                    attribute: chip.attribute,
                    annotation: chip.annotation,
                    values: [],
                    matched: [chip.token],
                });
                box.value = insertCriterion(box.value, criterion);
                box.focus();
            });
            row.append(button);
        }
        panel.append(row);
    }
    if (view.rewrittenQuery !== null) {
        const rewritten = document.createElement("div");
        rewritten.className = "trace-query";
        rewritten.textContent = view.rewrittenQuery;
        panel.append(rewritten);
    }
    for (const warning of view.warnings) {
        const line = document.createElement("div");
        line.className = "trace-warning";
        line.textContent = warning;
        panel.append(line);
    }
}

// -- boot ------------------------------------------------------------------------

function fillSelect(id: string, options: readonly string[]): void {
    const select = el<HTMLSelectElement>(id);
    select.innerHTML = "";
    for (const value of options) {
        const option = document.createElement("option");
        option.value = value;
        option.textContent = value;
        select.append(option);
    }
}

export async function boot(): Promise<void> {
    fillSelect("compose-context", CONTEXT_KINDS);
    fillSelect("compose-function", SEMANTIC_FUNCTIONS);
    el<HTMLSelectElement>("document-select").addEventListener("change", async (event) => {
        currentDocument = (event.target as HTMLSelectElement).value;
        await refreshTree();
    });
    el<HTMLFormElement>("compose-form").addEventListener("submit", submitComposer);
    el<HTMLInputElement>("compose-attribute").addEventListener("input", refreshComposer);
    el<HTMLInputElement>("compose-values").addEventListener("input", refreshComposer);
    el<HTMLFormElement>("search-form").addEventListener("submit", runSearch);
    refreshComposer();
    try {
        await refreshDocuments();
    } catch (error) {
        banner(describeError(error));
    }
}

if (typeof document !== "undefined" && document.getElementById("app") !== null) {
    void boot();
}
