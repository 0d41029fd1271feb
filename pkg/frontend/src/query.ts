/** Canonical query-text building, mirroring the server's printer exactly:
 * double quotes with \" and \\ escapes, ", " separators, criteria shaped
 * ("attr", [values...]).  The UI never invents a different surface syntax. */

import { BindingWire, ValueEntryWire, entryLabel, entryRank } from "./model.js";

export function quote(text: string): string {
    return '"' + text.replace(/\\/g, "\\\\").replace(/"/g, '\\"') + '"';
}

export function printEntry(entry: ValueEntryWire): string {
    const rank = entryRank(entry);
    if (rank === null) return quote(entryLabel(entry));
    return `[${quote(entryLabel(entry))}, ${rank}]`;
}

export function printValueList(entries: ValueEntryWire[]): string {
    return "[" + entries.map(printEntry).join(", ") + "]";
}

export function criterionText(attribute: string, entries: ValueEntryWire[]): string {
    return `(${quote(attribute)}, ${printValueList(entries)})`;
}

/** The criterion a clicked trace binding stands for: the inferred attribute
 * constrained to the token that produced the binding. */
export function bindingCriterion(token: string, binding: BindingWire): string {
    return criterionText(binding.attribute, [token]);
}

/** Insert a criterion into the query box: alone when the box is empty,
 * conjoined with the existing query otherwise (both forms parse). */
export function insertCriterion(current: string, criterion: string): string {
    const existing = current.trim();
    if (!existing) return criterion;
    return `${existing} ET ${criterion}`;
}

/** Bare constrained query from free tokens, e.g. (["a", "b"]). */
export function bareQuery(tokens: string[]): string {
    return `(${printValueList(tokens)})`;
}
