"""
First-order logic strings: parsing, precedence, canonical rendering
===================================================================

Premise annotations arrive as FOL strings in mixed notations (Unicode
connectives or ASCII spellings). The parser builds an AST with the
precedence ladder not > and > or > xor > implies > iff, right-assoc
implication, and widest-scope quantifiers; render_fol then emits one
canonical, fully parenthesized spelling so equal formulas compare as
equal strings.
"""

from orderaug import (
    BUILTIN_LABEL_SETS,
    Instance,
    Premise,
    parse_fol,
    render_fol,
    validate_fol_fields,
)

# ASCII and Unicode spellings parse to the same canonical form
for text in (
    "forall x (Cat(x) -> Animal(x))",
    "∀x (Cat(x) → Animal(x))",
):
    print(f"{text!r:48} -> {render_fol(parse_fol(text))}")

# precedence: conjunction binds tighter than implication, implication
# is right-associative, quantifiers take the widest scope
samples = [
    "P(a) & Q(a) -> R(a)",
    "P(a) -> Q(a) -> R(a)",
    "~P(a) | Q(a)",
    "forall x exists y (Loves(x, y) <-> ~Hates(x, y))",
]
for text in samples:
    ast = parse_fol(text)
    canon = render_fol(ast)
    # canonical output re-parses to the identical AST
    assert parse_fol(canon) == ast
    print(f"{text!r:48} -> {canon}")

# parse errors carry a position and a stable error code
try:
    parse_fol("P(a) ->")
except Exception as err:
    print("\nbad input:", err)

# validate_fol_fields is the ingest-side gate: unparseable annotations
# become errors, unbound variables only warnings, absent fields are fine
inst = Instance(
    id="demo",
    premises=(
        Premise(1, "Tom is a cat.", "Cat(tom)"),
        Premise(2, "Something is an animal.", "Animal(x)"),
        Premise(3, "Mystery premise.", "Broken(x"),
        Premise(4, "Unannotated premise."),
    ),
    conclusion_text="Tom is an animal.",
    label="True",
    label_set=BUILTIN_LABEL_SETS["FOLIO"],
)
print()
for v in validate_fol_fields(inst):
    print(" ", v)
