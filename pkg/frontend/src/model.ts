/** Wire types mirroring the annotex/1 record schema, plus the client-side
 * mirror of the annotation-object invariants used by the composer. */

export type ValueEntryWire = string | [string, number];

export interface ExplicitUnitWire {
    attribute: string;
    values: ValueEntryWire[];
}

export interface ImplicitUnitWire {
    attribute?: string;
    values?: ValueEntryWire[];
}

export interface AnnotationObjectWire {
    explicits?: ExplicitUnitWire[];
    implicits?: ImplicitUnitWire[];
}

export interface AnnotationRecordWire {
    id: string;
    context: { kind: string; note: string };
    target: { tier: string; id: string };
    annotator: string;
    semantic_function: string;
    operation_type: string;
    objective: string;
    signification: string;
    object: AnnotationObjectWire;
    dimensions: Record<string, string>;
    created_at: string;
    updated_at: string;
}

export interface DocumentWire {
    id: string;
    tier: string;
    title: string;
    origin: string | null;
}

export interface ProfileWire {
    id: string;
    name: string;
    role: string;
    declared: boolean;
}

export interface BindingWire {
    attribute: string;
    annotation: string;
    values: ValueEntryWire[];
    matched: string[];
}

export interface TokenResolutionWire {
    token: string;
    disposition: "resolved" | "dropped";
    bindings: BindingWire[];
}

export interface TraceWire {
    tokens: TokenResolutionWire[];
    query: string | null;
    warnings: string[];
}

export interface SearchResponseWire {
    ids: string[];
    trace: TraceWire | null;
    version: number;
}

export interface GraphNodeWire {
    annotation: AnnotationRecordWire;
    children: GraphNodeWire[];
}

export interface GraphWire {
    document: DocumentWire;
    annotations: GraphNodeWire[];
    version: number;
}

export const CONTEXT_KINDS = ["requête", "recherche-information", "interprétation", "proposition"] as const;
export const SEMANTIC_FUNCTIONS = ["partager", "inclure", "filtrer", "indexer", "faciliter", "attacher"] as const;

export function entryLabel(entry: ValueEntryWire): string {
    return typeof entry === "string" ? entry : entry[0];
}

export function entryRank(entry: ValueEntryWire): number | null {
    return typeof entry === "string" ? null : entry[1];
}

/** Parse the composer's values field: either comma-separated labels or the
 * canonical list syntax (which is valid JSON, e.g. ["a", ["b", 1]]). */
export function parseValuesInput(text: string): ValueEntryWire[] {
    const trimmed = text.trim();
    if (!trimmed) return [];
    if (trimmed.startsWith("[")) {
        let data: unknown;
        try {
            data = JSON.parse(trimmed);
        } catch {
            throw new Error("liste de valeurs illisible (syntaxe [\"a\", [\"b\", 1]])");
        }
        if (!Array.isArray(data)) throw new Error("la liste de valeurs doit être un tableau");
        return data.map((item) => {
            if (typeof item === "string") return item;
            if (Array.isArray(item) && item.length === 2
                && typeof item[0] === "string" && Number.isInteger(item[1])) {
                return [item[0], item[1]] as [string, number];
            }
            throw new Error(`valeur illisible: ${JSON.stringify(item)}`);
        });
    }
    return trimmed.split(",").map((part) => part.trim()).filter((part) => part.length > 0);
}

export interface ComposerState {
    attribute: string;
    valuesText: string;
}

/** Mirror of the server-side object invariants: at least one half present,
 * labels non-empty and unique.  Empty array means the form may submit. */
export function composerProblems(state: ComposerState): string[] {
    const problems: string[] = [];
    const attribute = state.attribute.trim();
    let values: ValueEntryWire[] = [];
    try {
        values = parseValuesInput(state.valuesText);
    } catch (error) {
        problems.push((error as Error).message);
        return problems;
    }
    if (!attribute && values.length === 0) {
        problems.push("objet vide : donner un attribut et/ou des valeurs");
    }
    const seen = new Set<string>();
    for (const entry of values) {
        const label = entryLabel(entry);
        if (!label.trim()) problems.push("libellé de valeur vide");
        if (seen.has(label)) problems.push(`libellé en double : ${label}`);
        seen.add(label);
    }
    return problems;
}

/** What the composer will produce: a complete unit, or a one-half one. */
export function composerKind(state: ComposerState): "explicit" | "implicit" | "empty" {
    let values: ValueEntryWire[];
    try {
        values = parseValuesInput(state.valuesText);
    } catch {
        return "empty";
    }
    const hasAttribute = state.attribute.trim().length > 0;
    if (hasAttribute && values.length > 0) return "explicit";
    if (hasAttribute || values.length > 0) return "implicit";
    return "empty";
}

export function buildObject(state: ComposerState): AnnotationObjectWire {
    const attribute = state.attribute.trim();
    const values = parseValuesInput(state.valuesText);
    if (attribute && values.length > 0) {
        return { explicits: [{ attribute, values }] };
    }
    if (attribute) return { implicits: [{ attribute }] };
    return { implicits: [{ values }] };
}
