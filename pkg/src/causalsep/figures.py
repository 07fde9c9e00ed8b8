"""The worked examples as ready-made graphs."""

from __future__ import annotations

from .graph import Graph, build_graph


def _g(nodes: str, edges: str) -> Graph:
    return build_graph(nodes.split(), [tuple(e.split("->")) for e in edges.split()])


def caffeine() -> Graph:
    return _g("courseload caffeine GPA", "courseload->caffeine courseload->GPA")


def boba() -> Graph:
    return _g("finals students sales", "finals->students students->sales")


def exam() -> Graph:
    return _g("procrastination grades anxiety", "procrastination->grades anxiety->grades")


def test_scores() -> Graph:
    return _g("sleep focus study score", "sleep->focus focus->score study->score")


def chain() -> Graph:
    """x -> u -> y -> v"""
    return _g("x u y v", "x->u u->y y->v")


def collider() -> Graph:
    """u -> w <- v"""
    return _g("u w v", "u->w v->w")


def double_conditioning() -> Graph:
    """u -> z1 -> z2 <- v"""
    return _g("u z1 z2 v", "u->z1 z1->z2 v->z2")


def unblocked_ancestry() -> Graph:
    """Conditioning on t cuts r off from u but not x, which also reaches u via y."""
    return _g("x r t s y u", "x->t r->t t->s x->y s->u y->u")


def partition_example() -> Graph:
    """Ten edges; with Z = {s, x} the path u-t-q-r-v is d-connected."""
    return _g(
        "u t q r v p s y x",
        "u->t u->p t->p p->s t->q r->q q->y y->x r->x r->v",
    )


def overlap_with_path() -> Graph:
    """A collider whose descendant route runs back into the path."""
    return _g("u q r s t v x y", "u->q r->q r->s s->t v->t q->x x->s s->y")


def overlapping_routes() -> Graph:
    """Two colliders whose descendant routes share a node."""
    return _g("u q r s t v x y z", "u->q r->q r->s s->t v->t q->x x->y t->y y->z")


def two_confounders() -> Graph:
    """u <- a1 -> z <- a2 -> v"""
    return _g("u a1 z a2 v", "a1->u a1->z a2->z a2->v")


FIGURES = {
    "caffeine": (caffeine, "caffeine", "GPA", ["courseload"]),
    "boba": (boba, "finals", "sales", ["students"]),
    "exam": (exam, "procrastination", "anxiety", ["grades"]),
    "test_scores": (test_scores, "sleep", "study", ["score"]),
    "chain": (chain, "u", "v", ["y"]),
    "collider": (collider, "u", "v", ["w"]),
    "double_conditioning": (double_conditioning, "u", "v", ["z1", "z2"]),
    "unblocked_ancestry": (unblocked_ancestry, "u", "r", ["t"]),
    "partition_example": (partition_example, "u", "v", ["s", "x"]),
    "overlap_with_path": (overlap_with_path, "u", "v", ["t", "y"]),
    "overlapping_routes": (overlapping_routes, "u", "v", ["z"]),
    "two_confounders": (two_confounders, "u", "v", ["z"]),
}
