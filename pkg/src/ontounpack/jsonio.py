"""Deterministic JSON interchange for models (.onto.json).

emit_json is byte-stable: keys sorted, declarations sorted by name, no
volatile data. Source spans are deliberately not serialized; they locate
declarations in DSL text and are not part of model structure.
"""
from __future__ import annotations

import json

from .core import (
    Classifier,
    Derivation,
    Direction,
    GeneralizationSet,
    Model,
    Multiplicity,
    QualitySpace,
    RelationDecl,
    RelationStereotype,
    Stereotype,
    ViaQuality,
)
from .parser import ParseError
from .core import SourceSpan


def _mult_dict(m: Multiplicity | None):
    return None if m is None else m.to_dict()


def classifier_dict(c: Classifier) -> dict:
    return {
        "name": c.name,
        "stereotype": c.stereotype.value,
        "parents": list(c.parents),
        "isAbstract": c.is_abstract,
    }


def relation_dict(r: RelationDecl) -> dict:
    return {
        "name": r.name,
        "stereotype": r.stereotype.value,
        "source": r.source,
        "target": r.target,
        "sourceMult": _mult_dict(r.source_mult),
        "targetMult": _mult_dict(r.target_mult),
        "derivedFrom": None if r.derived_from is None else r.derived_from.to_dict(),
        "viaQuality": None if r.via is None else r.via.to_dict(),
    }


def space_dict(s: QualitySpace) -> dict:
    if s.ordered is not None:
        return {"owner": s.owner, "kind": "ordered", "lo": s.ordered[0], "hi": s.ordered[1]}
    return {"owner": s.owner, "kind": "nominal", "labels": list(s.labels or ())}


def emit_json(model: Model) -> bytes:
    doc = {
        "name": model.name,
        "classifiers": [
            classifier_dict(c)
            for c in sorted(model.classifiers.values(), key=lambda c: c.name)
        ],
        "relations": [
            relation_dict(r)
            for r in sorted(model.relations.values(), key=lambda r: r.name)
        ],
        "generalizationSets": [
            {
                "name": g.name,
                "general": g.general,
                "specifics": sorted(g.specifics),
                "isDisjoint": g.is_disjoint,
                "isComplete": g.is_complete,
            }
            for g in sorted(model.gensets.values(), key=lambda g: g.name)
        ],
        "qualitySpaces": [
            space_dict(s)
            for s in sorted(model.spaces.values(), key=lambda s: s.owner)
        ],
    }
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")


class _Bad(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.detail = message


def _need(obj: dict, path: str, key: str, typ, what: str):
    if key not in obj:
        raise _Bad(path, f"missing field: {key}")
    val = obj[key]
    if not isinstance(val, typ) or (typ is int and isinstance(val, bool)):
        raise _Bad(f"{path}.{key}", f"expected {what}")
    return val

def _opt(obj: dict, path: str, key: str, typ, what: str, default):
    if key not in obj or obj[key] is None:
        return default
    return _need(obj, path, key, typ, what)


def _load_mult(obj, path: str) -> Multiplicity:
    if not isinstance(obj, dict):
        raise _Bad(path, "expected multiplicity object")
    lo = _need(obj, path, "min", int, "integer")
    hi = obj.get("max")
    if hi == "*":
        hi = None
    elif not isinstance(hi, int) or isinstance(hi, bool):
        raise _Bad(f"{path}.max", 'expected integer or "*"')
    try:
        return Multiplicity(lo, hi)
    except ValueError as exc:
        raise _Bad(path, str(exc)) from exc


def _load_enum(enum_cls, raw, path: str):
    try:
        return enum_cls(raw)
    except ValueError:
        raise _Bad(path, f"unknown {enum_cls.__name__.lower()} {raw!r}") from None


def load_json(data: bytes) -> Model | ParseError:
    """Decode interchange JSON into a Model, or a single ParseError.

    The error message carries the JSON path of the offending field; the span
    is degenerate (1:1) since JSON input has no meaningful DSL position.
    """
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        return ParseError(SourceSpan(1, 1, 0), f"invalid JSON: {exc}")
    try:
        if not isinstance(doc, dict):
            raise _Bad("$", "expected top-level object")
        name = _need(doc, "$", "name", str, "string")
        classifiers: dict[str, Classifier] = {}
        for i, raw in enumerate(_opt(doc, "$", "classifiers", list, "array", [])):
            path = f"classifiers[{i}]"
            if not isinstance(raw, dict):
                raise _Bad(path, "expected object")
            cname = _need(raw, path, "name", str, "string")
            stereo = _load_enum(Stereotype, _need(raw, path, "stereotype", str, "string"),
                                f"{path}.stereotype")
            parents = _opt(raw, path, "parents", list, "array", [])
            for j, p in enumerate(parents):
                if not isinstance(p, str):
                    raise _Bad(f"{path}.parents[{j}]", "expected string")
            abstract = _opt(raw, path, "isAbstract", bool, "boolean", False)
            if cname in classifiers:
                raise _Bad(path, f"duplicate classifier name '{cname}'")
            classifiers[cname] = Classifier(cname, stereo, tuple(parents), abstract)
        for cname, cls in classifiers.items():
            for p in cls.parents:
                if p not in classifiers:
                    raise _Bad(f"classifiers['{cname}'].parents", f"unknown classifier '{p}'")
        state: dict[str, int] = {}

        def cyclic(n: str) -> bool:
            if state.get(n) == 2:
                return False
            if state.get(n) == 1:
                return True
            state[n] = 1
            hit = any(cyclic(par) for par in classifiers[n].parents)
            state[n] = 2
            return hit

        for cname in sorted(classifiers):
            if state.get(cname) is None and cyclic(cname):
                raise _Bad(f"classifiers['{cname}']", f"specialization cycle through '{cname}'")

        relations: dict[str, RelationDecl] = {}
        for i, raw in enumerate(_opt(doc, "$", "relations", list, "array", [])):
            path = f"relations[{i}]"
            if not isinstance(raw, dict):
                raise _Bad(path, "expected object")
            rname = _need(raw, path, "name", str, "string")
            stereo = _load_enum(RelationStereotype, _need(raw, path, "stereotype", str, "string"),
                                f"{path}.stereotype")
            src = _need(raw, path, "source", str, "string")
            tgt = _need(raw, path, "target", str, "string")
            for end in (src, tgt):
                if end not in classifiers:
                    raise _Bad(path, f"unknown classifier '{end}'")
            smult = raw.get("sourceMult")
            tmult = raw.get("targetMult")
            smult = None if smult is None else _load_mult(smult, f"{path}.sourceMult")
            tmult = None if tmult is None else _load_mult(tmult, f"{path}.targetMult")
            comparative = stereo is RelationStereotype.COMPARATIVE
            if comparative and (smult is not None or tmult is not None):
                raise _Bad(path, "comparative relations carry no multiplicities")
            if not comparative and (smult is None or tmult is None):
                raise _Bad(path, "relation needs multiplicities on both ends")
            derived = None
            if raw.get("derivedFrom") is not None:
                dpath = f"{path}.derivedFrom"
                dobj = raw["derivedFrom"]
                if not isinstance(dobj, dict):
                    raise _Bad(dpath, "expected object")
                drel = _need(dobj, dpath, "relator", str, "string")
                if stereo is not RelationStereotype.MATERIAL:
                    raise _Bad(dpath, "only material relations take derivedFrom")
                if classifiers.get(drel) is None or classifiers[drel].stereotype is not Stereotype.RELATOR:
                    raise _Bad(dpath, f"derivedFrom must name a relator, got '{drel}'")
                dmult = _load_mult(_need(dobj, dpath, "mult", dict, "object"), f"{dpath}.mult")
                derived = Derivation(drel, dmult)
            via = None
            if raw.get("viaQuality") is not None:
                vpath = f"{path}.viaQuality"
                vobj = raw["viaQuality"]
                if not isinstance(vobj, dict):
                    raise _Bad(vpath, "expected object")
                q = _need(vobj, vpath, "quality", str, "string")
                if q not in classifiers:
                    raise _Bad(vpath, f"unknown classifier '{q}'")
                direction = _load_enum(Direction, _need(vobj, vpath, "direction", str, "string"),
                                       f"{vpath}.direction")
                via = ViaQuality(q, direction)
            if comparative and via is None:
                raise _Bad(path, "comparative relations need a viaQuality grounding")
            if not comparative and via is not None:
                raise _Bad(path, "only comparative relations take viaQuality")
            _check_source_stereotype(stereo, classifiers, src, path)
            if rname in relations:
                raise _Bad(path, f"duplicate relation name '{rname}'")
            relations[rname] = RelationDecl(rname, stereo, src, tgt, smult, tmult, derived, via)

        gensets: dict[str, GeneralizationSet] = {}
        probe = Model(name=name, classifiers=classifiers)
        for i, raw in enumerate(_opt(doc, "$", "generalizationSets", list, "array", [])):
            path = f"generalizationSets[{i}]"
            if not isinstance(raw, dict):
                raise _Bad(path, "expected object")
            gname = _need(raw, path, "name", str, "string")
            general = _need(raw, path, "general", str, "string")
            specifics = _need(raw, path, "specifics", list, "array")
            if general not in classifiers:
                raise _Bad(f"{path}.general", f"unknown classifier '{general}'")
            if len(specifics) < 2:
                raise _Bad(f"{path}.specifics", "needs at least two specifics")
            for j, s in enumerate(specifics):
                if not isinstance(s, str) or s not in classifiers:
                    raise _Bad(f"{path}.specifics[{j}]", f"unknown classifier {s!r}")
                if general not in probe.ancestors(s):
                    raise _Bad(f"{path}.specifics[{j}]", f"'{s}' does not specialize '{general}'")
            gensets[gname] = GeneralizationSet(
                gname, general, tuple(specifics),
                _opt(raw, path, "isDisjoint", bool, "boolean", False),
                _opt(raw, path, "isComplete", bool, "boolean", False),
            )

        spaces: dict[str, QualitySpace] = {}
        for i, raw in enumerate(_opt(doc, "$", "qualitySpaces", list, "array", [])):
            path = f"qualitySpaces[{i}]"
            if not isinstance(raw, dict):
                raise _Bad(path, "expected object")
            owner = _need(raw, path, "owner", str, "string")
            if classifiers.get(owner) is None or classifiers[owner].stereotype is not Stereotype.QUALITY:
                raise _Bad(f"{path}.owner", f"space owner '{owner}' must be a quality classifier")
            if owner in spaces:
                raise _Bad(path, f"duplicate space for quality '{owner}'")
            kind = _need(raw, path, "kind", str, "string")
            if kind == "ordered":
                lo = _need(raw, path, "lo", int, "integer")
                hi = _need(raw, path, "hi", int, "integer")
                if lo > hi:
                    raise _Bad(path, f"ordered space upper bound {hi} is below lower bound {lo}")
                spaces[owner] = QualitySpace(owner, (lo, hi), None)
            elif kind == "nominal":
                labels = _need(raw, path, "labels", list, "array")
                for j, lab in enumerate(labels):
                    if not isinstance(lab, str):
                        raise _Bad(f"{path}.labels[{j}]", "expected string")
                if len(set(labels)) != len(labels):
                    raise _Bad(f"{path}.labels", "nominal labels must be distinct")
                spaces[owner] = QualitySpace(owner, None, tuple(labels))
            else:
                raise _Bad(f"{path}.kind", "expected 'ordered' or 'nominal'")
    except _Bad as exc:
        return ParseError(SourceSpan(1, 1, 0), str(exc))
    return Model(name=name, classifiers=classifiers, relations=relations,
                 gensets=gensets, spaces=spaces)


def _check_source_stereotype(stereo, classifiers, src, path):
    src_stereo = classifiers[src].stereotype
    if stereo is RelationStereotype.MEDIATION and src_stereo is not Stereotype.RELATOR:
        raise _Bad(path, f"mediation source '{src}' must be a relator")
    if stereo is RelationStereotype.CHARACTERIZATION and src_stereo not in (
        Stereotype.MODE, Stereotype.QUALITY,
    ):
        raise _Bad(path, f"characterization source '{src}' must be a mode or quality")
    if stereo is RelationStereotype.PARTICIPATION and src_stereo is not Stereotype.EVENT:
        raise _Bad(path, f"participation source '{src}' must be an event")


__all__ = ["emit_json", "load_json", "classifier_dict", "relation_dict", "space_dict"]
