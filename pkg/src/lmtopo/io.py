"""Reading and writing the ``.2c`` face-list format.

Lines are ``# comment``, an optional header ``v N`` declaring vertices
0..N-1, ``e a b`` for edges lying in no face and ``f a b c`` for faces.
Output is canonical so that a write/read/write round trip is byte-stable.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .complex import TwoComplex, build_complex


def dumps(X: TwoComplex, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    verts = X.sorted_vertices
    edge_verts = {x for e in X.edges for x in e}
    if verts and verts == tuple(range(len(verts))):
        lines.append(f"v {len(verts)}")
    elif set(verts) - edge_verts:
        raise ValueError("isolated vertices must form a prefix 0..N-1 to be written")
    in_face = X.edge_faces
    for a, b in X.sorted_edges:
        if (a, b) not in in_face:
            lines.append(f"e {a} {b}")
    for a, b, c in X.sorted_faces:
        lines.append(f"f {a} {b} {c}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> TwoComplex:
    faces = []
    edges = []
    verts: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tag, *rest = line.split()
        try:
            nums = [int(x) for x in rest]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer label in {raw!r}") from None
        if tag == "v" and len(nums) == 1:
            verts.extend(range(nums[0]))
        elif tag == "e" and len(nums) == 2:
            edges.append(nums)
        elif tag == "f" and len(nums) == 3:
            faces.append(nums)
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    return build_complex(faces, edges, verts)


def read(path: str | Path) -> TwoComplex:
    return loads(Path(path).read_text())


def write(X: TwoComplex, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(dumps(X, comments))
