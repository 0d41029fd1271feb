import { describe, expect, it } from "vitest";

import {
    buildObject,
    composerKind,
    composerProblems,
    parseValuesInput,
} from "../src/model.js";

describe("values input parsing", () => {
    it("splits comma-separated labels", () => {
        expect(parseValuesInput("stratégie, développement"))
            .toEqual(["stratégie", "développement"]);
    });

    it("reads the canonical list syntax with ranks", () => {
        expect(parseValuesInput('["pauvre", ["pertinent", 4]]'))
            .toEqual(["pauvre", ["pertinent", 4]]);
    });

    it("rejects malformed lists", () => {
        expect(() => parseValuesInput('["a", [1, "b"]]')).toThrow();
        expect(() => parseValuesInput("[broken")).toThrow();
    });

    it("empty text means no values", () => {
        expect(parseValuesInput("   ")).toEqual([]);
    });
});

describe("composer validation (mirror of the object invariants)", () => {
    it("refuses the all-empty object", () => {
        expect(composerProblems({ attribute: "", valuesText: "" })).not.toHaveLength(0);
        expect(composerKind({ attribute: "", valuesText: "" })).toBe("empty");
    });

    it("accepts one half alone (implicit)", () => {
        expect(composerProblems({ attribute: "mots-clés", valuesText: "" })).toHaveLength(0);
        expect(composerKind({ attribute: "mots-clés", valuesText: "" })).toBe("implicit");
        expect(composerProblems({ attribute: "", valuesText: "pertinent" })).toHaveLength(0);
        expect(composerKind({ attribute: "", valuesText: "pertinent" })).toBe("implicit");
    });

    it("flags duplicate labels", () => {
        const problems = composerProblems({ attribute: "a", valuesText: "x, x" });
        expect(problems.some((p) => p.includes("double"))).toBe(true);
    });

    it("both halves make an explicit object", () => {
        const state = { attribute: "souligner", valuesText: "stratégie" };
        expect(composerKind(state)).toBe("explicit");
        expect(buildObject(state)).toEqual({
            explicits: [{ attribute: "souligner", values: ["stratégie"] }],
        });
    });

    it("one half builds an implicit object", () => {
        expect(buildObject({ attribute: "mots-clés", valuesText: "" })).toEqual({
            implicits: [{ attribute: "mots-clés" }],
        });
        expect(buildObject({ attribute: "", valuesText: "pertinent" })).toEqual({
            implicits: [{ values: ["pertinent"] }],
        });
    });
});
