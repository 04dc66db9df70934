"""
Premise shuffling: order-augmented copies of one instance
=========================================================

Condition augmentation rewrites an instance by permuting its premises
and renumbering them 1..n in the new order. Labels never change: the
conclusion follows from the set of premises, not from their order. Each
variant records the permutation that produced it so premise references
elsewhere (for example in a reused solution) can be remapped later.
"""

from orderaug import (
    BUILTIN_LABEL_SETS,
    Instance,
    Premise,
    TauBin,
    kendall_tau,
    shuffle_premises,
    shuffle_test_set,
    substream,
)

inst = Instance(
    id="demo",
    premises=(
        Premise(1, "All cats are animals.", "forall x (Cat(x) -> Animal(x))"),
        Premise(2, "Tom is a cat.", "Cat(tom)"),
        Premise(3, "Animals are not plants.", "forall x (Animal(x) -> not Plant(x))"),
        Premise(4, "Jerry is a plant."),
    ),
    conclusion_text="Tom is not a plant.",
    label="True",
    label_set=BUILTIN_LABEL_SETS["FOLIO"],
)

# k distinct shuffles in unconstrained (random) mode
rng = substream(7, "demo", inst.id)
variants = shuffle_premises(inst, k=3, mode=TauBin.random(), rng=rng)
for v in variants:
    order = " ".join(p.text.split()[0] for p in v.instance.premises)
    print(f"{v.instance.id}: perm={v.permutation.mapping}  "
          f"tau={kendall_tau(v.permutation):+.2f}  first words: {order}")

# FOL annotations travel with their premise text
v = variants[0]
for p in v.instance.premises:
    print(f"  {p.index}. {p.text}  fol={p.fol}")

# targeted mode: every copy lands in the requested tau bin; with n=4 the
# only permutation below -0.8 is the full reversal, so ask for one copy
hard = shuffle_premises(inst, k=1, mode=TauBin.parse("[-1.0,-0.8)"), rng=rng)
for v in hard:
    print(f"near-reversal: {v.permutation.mapping}  tau={kendall_tau(v.permutation):+.2f}")

# shuffle_test_set is the evaluation-side helper: one random shuffle per
# instance, labels kept, so a model can be scored on reordered inputs
test_variants = shuffle_test_set([inst], substream(7, "demo", "testset"))
print("test-set copy:", test_variants[0].instance.id,
      test_variants[0].permutation.mapping)
