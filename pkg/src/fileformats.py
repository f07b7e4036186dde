"""
JSON file formats for functions and distributions.

Converts library objects to and from the on-disk dictionaries used by the
CLI. Variable indices are 1-based on disk and 0-based in memory.

Function files:
    {"repr": "tree", "n": N, "nodes": [{"var": i, "lo": j, "hi": k} | {"leaf": b}], "root": r}
    {"repr": "poly", "n": N, "monomials": [[1-based indices], ...]}
    {"repr": "truthtable", "n": N, "bits": "<hex, LSB = f(0...0)>"}

Distribution files:
    {"dist": "uniform"}
    {"dist": "explicit", "points": [{"x": "<bitstring>", "p": w}, ...]}
    {"dist": "product", "p": [Pr[x_1 = 1], ..., Pr[x_n = 1]]}
"""

import json
from typing import Any, Dict, List, Optional

from src.boolfn import (
    UNIFORM,
    Assignment,
    BooleanFunction,
    DecisionTree,
    Distribution,
    ExplicitDistribution,
    F2Polynomial,
    Internal,
    Leaf,
    Node,
    SamplerDistribution,
    TruthTable,
    UniformDistribution,
    leaf,
    mask_vars,
    product_distribution,
    vars_mask,
)
from src.errors import MalformedFunctionError

VALID_REPRS = ("tree", "poly", "truthtable")


def function_to_json(f: BooleanFunction) -> Dict[str, Any]:
    """
    Build the file dictionary for a function.

    Args:
        f: DecisionTree, F2Polynomial or TruthTable

    Returns:
        dict ready for json.dumps; trees are flattened in preorder with the
        root at index 0
    """
    if isinstance(f, DecisionTree):
        nodes: List[Dict[str, int]] = []

        def _emit(node: Node) -> int:
            index = len(nodes)
            if isinstance(node, Leaf):
                nodes.append({"leaf": node.value})
                return index
            nodes.append({})
            lo = _emit(node.lo)
            hi = _emit(node.hi)
            nodes[index] = {"var": node.var + 1, "lo": lo, "hi": hi}
            return index

        root = _emit(f.root)
        return {"repr": "tree", "n": f.n, "nodes": nodes, "root": root}
    if isinstance(f, F2Polynomial):
        monomials = [[v + 1 for v in mask_vars(m)] for m in f.sorted_monomials()]
        return {"repr": "poly", "n": f.n, "monomials": monomials}
    if isinstance(f, TruthTable):
        return {"repr": "truthtable", "n": f.n, "bits": format(f.to_int(), "x")}
    raise ValueError(f"Invalid function type: {type(f).__name__}. Valid types are: DecisionTree, F2Polynomial, TruthTable")


def function_from_json(obj: Dict[str, Any]) -> BooleanFunction:
    """Parse a function dictionary; structural problems raise MalformedFunctionError."""
    kind = obj.get("repr")
    if kind not in VALID_REPRS:
        raise MalformedFunctionError(f"Invalid repr: {kind}. Valid reprs are: {', '.join(VALID_REPRS)}")
    try:
        n = int(obj["n"])
        if kind == "tree":
            return DecisionTree(n, _tree_from_arena(obj["nodes"], int(obj["root"])))
        if kind == "poly":
            monomials = []
            for mono in obj["monomials"]:
                if any(int(v) < 1 for v in mono):
                    raise MalformedFunctionError(f"monomial index below 1 in {mono}")
                monomials.append(vars_mask(int(v) - 1 for v in mono))
            acc: set = set()
            for m in monomials:
                acc ^= {m}
            return F2Polynomial(frozenset(acc), n)
        return TruthTable.from_int(n, int(obj["bits"], 16) if obj["bits"] else 0)
    except (KeyError, TypeError) as e:
        raise MalformedFunctionError(f"incomplete {kind} file: {e}")


def _tree_from_arena(nodes: List[Dict[str, int]], root: int) -> Node:
    built: Dict[int, Node] = {}
    visiting = set()

    def _build(i: int) -> Node:
        if i in built:
            return built[i]
        if not 0 <= i < len(nodes):
            raise MalformedFunctionError(f"node index {i} out of range")
        if i in visiting:
            raise MalformedFunctionError(f"cycle through node {i}")
        visiting.add(i)
        spec = nodes[i]
        if "leaf" in spec:
            node: Node = leaf(int(spec["leaf"])) if spec["leaf"] in (0, 1) else Leaf(int(spec["leaf"]))
        else:
            var = int(spec["var"])
            if var < 1:
                raise MalformedFunctionError(f"Invalid variable index {var}. Valid indices start at 1")
            node = Internal(var - 1, _build(int(spec["lo"])), _build(int(spec["hi"])))
        visiting.discard(i)
        built[i] = node
        return node

    return _build(root)


def distribution_to_json(dist: Distribution) -> Dict[str, Any]:
    if isinstance(dist, UniformDistribution):
        return {"dist": "uniform"}
    if isinstance(dist, ExplicitDistribution):
        points = [
            {"x": Assignment(dist.n, x).to_string(), "p": p}
            for x, p in zip(dist.points, dist.probs)
        ]
        return {"dist": "explicit", "points": points}
    if isinstance(dist, SamplerDistribution) and dist.name == "product":
        return {"dist": "product", "p": list(dist.bias)}
    raise ValueError(f"Invalid distribution type: {type(dist).__name__}. Valid types are: uniform, explicit, product")


def distribution_from_json(obj: Dict[str, Any]) -> Distribution:
    kind = obj.get("dist")
    if kind == "uniform":
        return UNIFORM
    if kind == "explicit":
        points = [Assignment.from_string(entry["x"]) for entry in obj.get("points", [])]
        if not points:
            raise MalformedFunctionError("explicit distribution has no points")
        n = points[0].n
        if any(a.n != n for a in points):
            raise MalformedFunctionError("explicit distribution points have different lengths")
        probs = tuple(float(entry["p"]) for entry in obj["points"])
        return ExplicitDistribution(n, tuple(a.bits for a in points), probs)
    if kind == "product":
        bias = obj.get("p")
        if not isinstance(bias, list) or not bias:
            raise MalformedFunctionError("product distribution needs a non-empty list p")
        return product_distribution(bias)
    raise MalformedFunctionError(f"Invalid dist: {kind}. Valid dists are: uniform, explicit, product")


def dumps(obj: Dict[str, Any], pretty: bool = False) -> str:
    """Deterministic JSON text: one line by default."""
    if pretty:
        return json.dumps(obj, indent=2, sort_keys=True)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def save_function(f: BooleanFunction, path: str, pretty: bool = False) -> None:
    with open(path, "w") as out:
        out.write(dumps(function_to_json(f), pretty) + "\n")


def load_function(path: str) -> BooleanFunction:
    try:
        with open(path, "r") as f:
            return function_from_json(json.load(f))
    except json.JSONDecodeError as e:
        raise MalformedFunctionError(f"{path} is not valid JSON: {e}")


def load_distribution(path: Optional[str]) -> Distribution:
    """None or "uniform" gives the uniform distribution."""
    if path is None or path == "uniform":
        return UNIFORM
    try:
        with open(path, "r") as f:
            return distribution_from_json(json.load(f))
    except json.JSONDecodeError as e:
        raise MalformedFunctionError(f"{path} is not valid JSON: {e}")
