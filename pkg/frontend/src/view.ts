/** Pure render models: the DOM layer in app.ts only walks these. */

import {
    AnnotationRecordWire,
    GraphWire,
    TraceWire,
    entryLabel,
    entryRank,
} from "./model.js";

export interface TreeRow {
    depth: number;
    record: AnnotationRecordWire;
    units: string[];
}

function unitSummaries(record: AnnotationRecordWire): string[] {
    const out: string[] = [];
    for (const unit of record.object.explicits ?? []) {
        const values = unit.values.map((entry) => {
            const rank = entryRank(entry);
            return rank === null ? entryLabel(entry) : `${entryLabel(entry)} (${rank})`;
        });
        out.push(`${unit.attribute} : ${values.join(", ")}`);
    }
    for (const unit of record.object.implicits ?? []) {
        if (unit.attribute !== undefined) {
            out.push(`${unit.attribute} : ?`);
        } else {
            out.push(`? : ${(unit.values ?? []).map(entryLabel).join(", ")}`);
        }
    }
    return out;
}

/** Flatten the nested annotation tree; tertiary annotations sit one level
 * deeper than the annotation they annotate. */
export function flattenGraph(graph: GraphWire): TreeRow[] {
    const rows: TreeRow[] = [];
    const walk = (nodes: GraphWire["annotations"], depth: number) => {
        for (const node of nodes) {
            rows.push({ depth, record: node.annotation, units: unitSummaries(node.annotation) });
            walk(node.children, depth + 1);
        }
    };
    walk(graph.annotations, 0);
    return rows;
}

export interface BindingChip {
    token: string;
    attribute: string;
    annotation: string;
    storedValues: string;
}

export interface TraceTokenView {
    token: string;
    dropped: boolean;
    chips: BindingChip[];
}

export interface TraceView {
    tokens: TraceTokenView[];
    rewrittenQuery: string | null;
    warnings: string[];
}

/** Trace panel model: one chip per (token, binding); the canonical rewritten
 * query is shown verbatim as the server printed it. */
export function traceView(trace: TraceWire): TraceView {
    return {
        tokens: trace.tokens.map((res) => ({
            token: res.token,
            dropped: res.disposition === "dropped",
            chips: res.bindings.map((binding) => ({
                token: res.token,
                attribute: binding.attribute,
                annotation: binding.annotation,
                storedValues: binding.values.map((entry) => {
                    const rank = entryRank(entry);
                    return rank === null ? entryLabel(entry) : `${entryLabel(entry)}:${rank}`;
                }).join(", "),
            })),
        })),
        rewrittenQuery: trace.query,
        warnings: trace.warnings,
    };
}
