"""Text and JSON file formats used by the command line.

Graph file::

    # comment
    nodes 4
    link 0 1 0.25 1

``link <u> <v> <pf> <capacity 0|1>``.  Node labels that are not integers in
0..n-1 are mapped to dense ids in order of first appearance.  Request files
hold ``req <s> <t> <mcfp> <priority>`` lines, partition files
``free|backup|primary <link>`` lines, and scenarios are JSON objects
``{"connections": [{"primary": [...], "backup": [...]}, ...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InputError
from .failure import PathPair, Request
from .graph import PROB_TOL, Link, Network
from .online import LinkPartition


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_network(text: str) -> Network:
    return parse_network_labeled(text)[0]


def parse_network_labeled(text: str) -> tuple[Network, dict[str, int] | None]:
    """Network plus the label-to-id map (None when labels are already ids)."""
    n = None
    rows = []
    for lineno, fields in _records(text):
        key = fields[0]
        if key == "nodes":
            if len(fields) != 2:
                raise InputError(f"line {lineno}: expected 'nodes <n>'")
            try:
                n = int(fields[1])
            except ValueError:
                raise InputError(f"line {lineno}: bad node count {fields[1]!r}") from None
        elif key == "link":
            if len(fields) != 5:
                raise InputError(f"line {lineno}: expected 'link <u> <v> <pf> <cap>'")
            try:
                pf = float(fields[3])
            except ValueError:
                raise InputError(f"line {lineno}: bad probability {fields[3]!r}") from None
            if fields[4] not in ("0", "1"):
                raise InputError(f"line {lineno}: capacity flag must be 0 or 1")
            rows.append((lineno, fields[1], fields[2], pf, fields[4] == "1"))
        else:
            raise InputError(f"line {lineno}: unknown record {key!r}")
    if n is None:
        raise InputError("missing 'nodes' header")
    labels = [x for row in rows for x in row[1:3]]
    dense = all(x.isdigit() and int(x) < n for x in labels)
    ids = {}
    if not dense:
        for x in labels:
            ids.setdefault(x, len(ids))
        if len(ids) > n:
            raise InputError(f"{len(ids)} distinct node labels but header says {n}")
    links = []
    for lineno, a, b, pf, cap in rows:
        u, v = (int(a), int(b)) if dense else (ids[a], ids[b])
        links.append(Link(u, v, pf, cap))
    normalized = bool(links) and abs(sum(ln.pf for ln in links) - 1.0) <= PROB_TOL
    return Network(n, tuple(links), normalized), (None if dense else ids)


def format_network(net: Network) -> str:
    lines = [f"nodes {net.n}"]
    for ln in net.links:
        lines.append(f"link {ln.u} {ln.v} {ln.pf!r} {int(ln.capacity)}")
    return "\n".join(lines) + "\n"


def read_network(path) -> Network:
    return parse_network(Path(path).read_text())


def write_network(net: Network, path) -> None:
    Path(path).write_text(format_network(net))


def parse_requests(text: str, labels: dict[str, int] | None = None) -> list[Request]:
    """Requests sorted by priority; node fields go through ``labels`` when given."""
    out = []
    for lineno, fields in _records(text):
        if fields[0] != "req" or len(fields) != 5:
            raise InputError(f"line {lineno}: expected 'req <s> <t> <mcfp> <priority>'")
        try:
            if labels is None:
                s, t = int(fields[1]), int(fields[2])
            else:
                s, t = labels[fields[1]], labels[fields[2]]
            out.append(Request(s, t, float(fields[3]), int(fields[4])))
        except KeyError as exc:
            raise InputError(f"line {lineno}: unknown node label {exc}") from None
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    return sorted(out, key=lambda r: r.priority)


def read_requests(path, labels: dict[str, int] | None = None) -> list[Request]:
    return parse_requests(Path(path).read_text(), labels)


def parse_partition(text: str, net: Network) -> LinkPartition:
    sets = {"free": set(), "backup": set(), "primary": set()}
    for lineno, fields in _records(text):
        if fields[0] not in sets or len(fields) != 2:
            raise InputError(f"line {lineno}: expected 'free|backup|primary <link>'")
        try:
            e = int(fields[1])
        except ValueError:
            raise InputError(f"line {lineno}: bad link index {fields[1]!r}") from None
        if not 0 <= e < net.m:
            raise InputError(f"line {lineno}: link {e} out of range")
        sets[fields[0]].add(e)
    listed = sets["free"] | sets["backup"] | sets["primary"]
    sets["free"] |= set(range(net.m)) - listed  # unlisted links are free
    part = LinkPartition(sets["free"], sets["backup"], sets["primary"])
    part.check(net)
    return part


def read_partition(path, net: Network) -> LinkPartition:
    return parse_partition(Path(path).read_text(), net)


def parse_scenario(text: str) -> list[PathPair]:
    try:
        data = json.loads(text)
        return [PathPair(tuple(int(e) for e in c["primary"]), tuple(int(e) for e in c["backup"]))
                for c in data["connections"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad scenario JSON: {exc}") from None


def read_scenario(path) -> list[PathPair]:
    return parse_scenario(Path(path).read_text())


def dumps(obj) -> str:
    """Stable JSON text for command output."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
