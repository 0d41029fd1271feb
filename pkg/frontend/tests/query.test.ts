import { describe, expect, it } from "vitest";

import {
    bareQuery,
    bindingCriterion,
    criterionText,
    insertCriterion,
    printValueList,
    quote,
} from "../src/query.js";

// the Python suite pins these exact shapes as parseable by the server
describe("canonical printing", () => {
    it("quotes with backslash escapes", () => {
        expect(quote("pertinent")).toBe('"pertinent"');
        expect(quote('avec "guillemets"')).toBe('"avec \\"guillemets\\""');
        expect(quote("anti\\slash")).toBe('"anti\\\\slash"');
    });

    it("prints plain and ranked entries", () => {
        expect(printValueList(["a", ["b", 2]])).toBe('["a", ["b", 2]]');
    });

    it("builds criteria in the server's canonical shape", () => {
        expect(criterionText("souligner", ["pertinent"])).toBe('("souligner", ["pertinent"])');
        expect(criterionText("ordonner", [["pertinent", 4]]))
            .toBe('("ordonner", [["pertinent", 4]])');
    });

    it("builds bare constrained queries", () => {
        expect(bareQuery(["désinformation", "pertinent"]))
            .toBe('(["désinformation", "pertinent"])');
    });
});

describe("criterion insertion", () => {
    const binding = {
        attribute: "souligner",
        annotation: "note_211",
        values: ["pertinent"],
        matched: ["pertinent"],
    };

    it("fills an empty query box", () => {
        expect(insertCriterion("", bindingCriterion("pertinent", binding)))
            .toBe('("souligner", ["pertinent"])');
    });

    it("conjoins with an existing query", () => {
        const current = '(["désinformation", "protection du patrimoine", "pertinent"])';
        expect(insertCriterion(current, bindingCriterion("pertinent", binding)))
            .toBe(`${current} ET ("souligner", ["pertinent"])`);
    });

    it("escapes the token it inserts", () => {
        const strange = { ...binding, attribute: 'avec "guillemets"' };
        expect(bindingCriterion("anti\\slash", strange))
            .toBe('("avec \\"guillemets\\"", ["anti\\\\slash"])');
    });
});
