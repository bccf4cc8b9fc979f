"""Bounded enumeration of instance worlds (snapshot interpretations).

A world is a finite interpretation of a model: individuals carrying type
sets, links for the dependence relations (mediation, participation, internal,
mode characterization), derived material links, and quality values. The
enumerator is exhaustive within a Scope, returns canonically-ordered,
pairwise non-isomorphic worlds, and is deterministic.

Symmetry handling: individuals of one identity base are interchangeable, so
free type profiles are assigned as sorted multisets, never-targeted bases get
their whole link/value neighborhood packed into per-individual "options"
(again multisets), and every assembled world passes through a canonical
relabeling (color refinement plus permutation minimization within color
classes) before deduplication.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, combinations_with_replacement, permutations, product

from .core import (
    MOMENT_ROOTS,
    NON_SORTALS,
    ROLE_FAMILY,
    SORTALS,
    Model,
    Multiplicity,
    RelationDecl,
    RelationStereotype,
    Stereotype,
    identity_root,
)
from .errors import (
    IllFormedModelError,
    MissingQualityValueError,
    ScopeTooLargeError,
)
from .rules import Severity, check


def _as_sorted_items(value) -> tuple:
    if isinstance(value, dict):
        return tuple(sorted(value.items()))
    return tuple(value)


@dataclass(frozen=True)
class Scope:
    """Bounds for world enumeration.

    per_classifier caps individuals per identity base; an entry for a
    non-base classifier acts as a filter on that classifier's extension.
    default_count applies to bases only — listing a role caps it, omitting it
    does not.
    """

    per_classifier: tuple = ()
    default_count: int = 2
    quality_values: tuple = ()
    world_limit: int = 100

    def __post_init__(self):
        per = _as_sorted_items(self.per_classifier)
        for name, count in per:
            if count < 0:
                raise ValueError(f"scope count for '{name}' must be >= 0, got {count}")
        qv = tuple(
            (q, tuple(vs))
            for q, vs in _as_sorted_items(self.quality_values)
        )
        if self.default_count < 0:
            raise ValueError(f"default scope count must be >= 0, got {self.default_count}")
        if self.world_limit < 1:
            raise ValueError(f"world limit must be >= 1, got {self.world_limit}")
        object.__setattr__(self, "per_classifier", per)
        object.__setattr__(self, "quality_values", qv)

    @cached_property
    def _caps(self) -> dict[str, int]:
        return dict(self.per_classifier)

    def cap(self, name: str) -> int | None:
        """Explicit cap for a classifier, None when not listed."""
        return self._caps.get(name)

    def count_for_base(self, name: str) -> int:
        explicit = self._caps.get(name)
        return self.default_count if explicit is None else explicit

    def values_for(self, quality: str) -> tuple | None:
        for q, vs in self.quality_values:
            if q == quality:
                return vs
        return None


DEFAULT_SCOPE = Scope()


@dataclass(frozen=True)
class InstanceWorld:
    """One snapshot interpretation; all rows are canonically sorted tuples."""

    individuals: tuple[tuple[str, str], ...] = ()          # (id, base classifier)
    type_rows: tuple[tuple[str, tuple[str, ...]], ...] = ()
    links: tuple[tuple[str, str, str], ...] = ()           # (relation, source, target)
    value_rows: tuple[tuple[str, str, object], ...] = ()   # (quality, bearer, value)

    @cached_property
    def types(self) -> dict[str, frozenset[str]]:
        return {ind: frozenset(ts) for ind, ts in self.type_rows}

    @cached_property
    def values(self) -> dict[tuple[str, str], object]:
        return {(q, b): v for q, b, v in self.value_rows}

    @cached_property
    def link_set(self) -> frozenset[tuple[str, str, str]]:
        return frozenset(self.links)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(i for i, _ in self.individuals)

    def extension(self, classifier: str) -> list[str]:
        return [i for i in self.ids if classifier in self.types.get(i, frozenset())]

    def to_dict(self) -> dict:
        return {
            "individuals": [list(row) for row in self.individuals],
            "typeAssignments": {ind: list(ts) for ind, ts in self.type_rows},
            "links": [list(row) for row in self.links],
            "qualityValues": [list(row) for row in self.value_rows],
        }


EMPTY_WORLD = InstanceWorld()


@dataclass(frozen=True)
class Goal:
    """Existentially closed conjunction of typing and link atoms."""

    typings: tuple[tuple[str, str], ...]
    links: tuple[tuple[str, str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "typings", tuple(tuple(t) for t in self.typings))
        object.__setattr__(self, "links", tuple(tuple(l) for l in self.links))
        typed = {v for v, _ in self.typings}
        for _, a, b in self.links:
            for v in (a, b):
                if v not in typed:
                    raise ValueError(f"goal variable '{v}' appears in no typing atom")


def goal_holds(world: InstanceWorld, goal: Goal) -> bool:
    required: dict[str, set[str]] = {}
    for var, cls in goal.typings:
        required.setdefault(var, set()).add(cls)
    variables = sorted(required)
    candidates = []
    for var in variables:
        need = required[var]
        ids = [i for i in world.ids if need <= world.types[i]]
        if not ids:
            return False
        candidates.append(ids)
    links = world.link_set
    for combo in product(*candidates):
        env = dict(zip(variables, combo))
        if all((r, env[a], env[b]) in links for r, a, b in goal.links):
            return True
    return False


# --------------------------------------------------------------------------
# model preprocessing shared by the enumerator and the validator
# --------------------------------------------------------------------------

_STORED = (
    RelationStereotype.MEDIATION,
    RelationStereotype.PARTICIPATION,
    RelationStereotype.INTERNAL,
)


class _Prep:
    def __init__(self, model: Model, scope: Scope):
        self.model = model
        self.scope = scope
        cls = model.classifiers

        self.base_of: dict[str, str | None] = {
            name: identity_root(model, name) for name in cls
        }
        self.bases: list[str] = sorted(
            name for name, root in self.base_of.items() if root == name
        )
        self.family: dict[str, list[str]] = {b: [] for b in self.bases}
        for name, root in self.base_of.items():
            if root in self.family:
                self.family[root].append(name)
        for members in self.family.values():
            members.sort()

        # classifiers whose membership is derived from links (role family with
        # a defining relation targeting them exactly)
        self.defining: dict[str, list[str]] = {}
        for r in model.relations.values():
            if r.stereotype in (RelationStereotype.MEDIATION, RelationStereotype.PARTICIPATION):
                if cls.get(r.target) is not None and cls[r.target].stereotype in ROLE_FAMILY:
                    self.defining.setdefault(r.target, []).append(r.name)
        for names in self.defining.values():
            names.sort()
        self.justified: frozenset[str] = frozenset(self.defining)

        self.free: dict[str, list[str]] = {
            b: [
                c for c in self.family[b]
                if c != b and c not in self.justified
            ]
            for b in self.bases
        }
        self.justified_sortals_of: dict[str, list[str]] = {
            b: sorted(
                c for c in self.justified
                if cls[c].stereotype in SORTALS and self.base_of.get(c) == b
            )
            for b in self.bases
        }

        # stored-link relations: dependence links plus mode characterizations
        self.stored: list[RelationDecl] = sorted(
            (
                r for r in model.relations.values()
                if r.stereotype in _STORED
                or (
                    r.stereotype is RelationStereotype.CHARACTERIZATION
                    and cls.get(r.source) is not None
                    and cls[r.source].stereotype is Stereotype.MODE
                )
            ),
            key=lambda r: r.name,
        )
        self.stored_names = {r.name for r in self.stored}

        # quality characterizations: value assignments, not links
        self.value_chars: list[RelationDecl] = sorted(
            (
                r for r in model.relations.values()
                if r.stereotype is RelationStereotype.CHARACTERIZATION
                and cls.get(r.source) is not None
                and cls[r.source].stereotype is Stereotype.QUALITY
            ),
            key=lambda r: r.name,
        )

        # material relations and their end-compatible mediations
        self.materials: list[tuple[RelationDecl, list[str], list[str]]] = []
        for r in sorted(model.relations.values(), key=lambda r: r.name):
            if r.stereotype is not RelationStereotype.MATERIAL or r.derived_from is None:
                continue
            relator = r.derived_from.relator
            meds = model.mediations_of(relator)
            src_ok = [
                m.name for m in meds
                if m.target in model.ancestors_or_self(r.source) | model.descendants(r.source)
            ]
            tgt_ok = [
                m.name for m in meds
                if m.target in model.ancestors_or_self(r.target) | model.descendants(r.target)
            ]
            self.materials.append((r, src_ok, tgt_ok))
        self.material_names = {r.name for r, _, _ in self.materials} | {
            r.name for r in model.relations.values()
            if r.stereotype is RelationStereotype.MATERIAL
        }

        # bases whose individuals can be link targets (not packable as options)
        targeted: set[str] = set()
        for r in self.stored:
            targeted |= self.bases_of(r.target)
        self.pure_bases: list[str] = [b for b in self.bases if b not in targeted]
        self.open_bases: list[str] = [b for b in self.bases if b in targeted]

    # -- taxonomy helpers ------------------------------------------------

    def bases_of(self, classifier: str) -> frozenset[str]:
        """Identity bases whose individuals may instantiate `classifier`."""
        model = self.model
        cls = model.classifiers
        if classifier not in cls:
            return frozenset()
        if cls[classifier].stereotype in SORTALS or cls[classifier].stereotype in MOMENT_ROOTS:
            root = self.base_of.get(classifier)
            return frozenset((root,)) if root is not None else frozenset()
        roots = set()
        for d in model.descendants_or_self(classifier):
            if cls[d].stereotype in SORTALS or cls[d].stereotype in MOMENT_ROOTS:
                root = self.base_of.get(d)
                if root is not None:
                    roots.add(root)
        return frozenset(roots)

    def up_close(self, names) -> frozenset[str]:
        out: set[str] = set()
        for n in names:
            out |= self.model.ancestors_or_self(n)
        return frozenset(out)

    # -- enumeration building blocks --------------------------------------

    @cached_property
    def profiles(self) -> dict[str, list[frozenset[str]]]:
        """Per base: deduped upward closures of free-classifier choices."""
        out: dict[str, list[frozenset[str]]] = {}
        for b in self.bases:
            free = self.free[b]
            seen: dict[frozenset[str], None] = {}
            for size in range(len(free) + 1):
                for chosen in combinations(free, size):
                    closure = self.up_close((b, *chosen))
                    if self._profile_ok(closure):
                        seen.setdefault(closure, None)
            out[b] = sorted(seen, key=lambda s: tuple(sorted(s)))
        return out

    def _profile_ok(self, closure: frozenset[str]) -> bool:
        for g in self.model.gensets.values():
            if g.is_disjoint:
                hit = [s for s in g.specifics if s in closure]
                if len(hit) > 1:
                    return False
        return True

    def possible_types(self, base: str, profile: frozenset[str]) -> frozenset[str]:
        """Profile closure plus every justified sortal the profile can support."""
        out = set(profile)
        for j in self.justified_sortals_of.get(base, ()):
            needed = self.model.ancestors(j) & frozenset(self.free[base])
            if needed <= profile:
                out |= self.model.ancestors_or_self(j)
        return frozenset(out)

    def allowed_values(self, quality: str) -> tuple:
        space = self.model.spaces.get(quality)
        chosen = self.scope.values_for(quality)
        if space is None:
            if chosen is not None:
                return chosen
            raise ValueError(f"quality '{quality}' has no declared space and no scope values")
        if chosen is not None:
            bad = [v for v in chosen if not space.contains(v)]
            if bad:
                raise ValueError(
                    f"scope value {bad[0]!r} outside the space of quality '{quality}'"
                )
            return chosen
        if space.ordered is not None:
            lo, hi = space.ordered
            return tuple(range(lo, min(lo + 3, hi + 1)))
        return (space.labels or ())[:3]


def _target_subsets(candidates: tuple, mult: Multiplicity | None):
    """All target-sets one source may link, sized by the target-side bound."""
    if mult is None:
        yield ()
        return
    hi = len(candidates) if mult.max is None else min(mult.max, len(candidates))
    for size in range(mult.min, hi + 1):
        yield from combinations(candidates, size)


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------

def _check_model(model: Model):
    diagnostics = check(model)
    errors = [d for d in diagnostics if d.severity is Severity.ERROR]
    if errors:
        raise IllFormedModelError(errors)


def enumerate_worlds(
    model: Model,
    scope: Scope | None = None,
    *,
    max_total_individuals: int = 14,
) -> list[InstanceWorld]:
    """All pairwise non-isomorphic worlds within scope, canonically ordered.

    Exhaustive whenever the total count fits under scope.world_limit; the
    list is truncated to world_limit otherwise.
    """
    scope = scope or DEFAULT_SCOPE
    worlds = _enumerate_all(model, scope, max_total_individuals)
    return worlds[: scope.world_limit]


def _enumerate_all(model: Model, scope: Scope, max_total: int) -> list[InstanceWorld]:
    _check_model(model)
    prep = _Prep(model, scope)
    caps = {b: scope.count_for_base(b) for b in prep.bases}
    total_cap = sum(caps.values())
    if total_cap > max_total:
        raise ScopeTooLargeError(
            f"scope admits up to {total_cap} individuals; the hard cap is {max_total}"
        )
    found: dict[tuple, InstanceWorld] = {}
    bases = prep.bases
    for counts in product(*(range(caps[b] + 1) for b in bases)):
        count_of = dict(zip(bases, counts))
        for world in _worlds_for_counts(prep, count_of):
            key, canon = world
            found.setdefault(key, canon)
    ordered = sorted(found.items(), key=lambda kv: kv[0])
    return [w for _, w in ordered]


def _worlds_for_counts(prep: _Prep, count_of: dict[str, int]):
    """Yield (canonical key, world) for one fixed per-base individual count."""
    open_bases = [b for b in prep.open_bases if count_of[b] > 0]
    pure_bases = [b for b in prep.pure_bases if count_of[b] > 0]

    # phase 1: free-type profiles for open (targetable) bases, as multisets
    open_choices = [
        list(combinations_with_replacement(prep.profiles[b], count_of[b]))
        for b in open_bases
    ]
    for open_profiles in product(*open_choices):
        individuals: list[tuple[str, str]] = []   # (id, base); ids provisional
        profile_of: dict[str, frozenset[str]] = {}
        for b, profs in zip(open_bases, open_profiles):
            for i, prof in enumerate(profs):
                ind = f"{b}_{i}"
                individuals.append((ind, b))
                profile_of[ind] = prof
        possible = {
            ind: prep.possible_types(base, profile_of[ind])
            for ind, base in individuals
        }

        # phase 2: stored relations whose source lives in an open base
        fallback_rels = [
            r for r in prep.stored
            if prep.bases_of(r.source) & set(open_bases)
        ]
        fallback_choices = []
        for r in fallback_rels:
            sources = tuple(
                ind for ind, _ in individuals if r.source in possible[ind]
            )
            targets = tuple(
                ind for ind, _ in individuals if r.target in possible[ind]
            )
            per_source = []
            for s in sources:
                opts = [
                    tuple((r.name, s, t) for t in chosen)
                    for chosen in _target_subsets(targets, r.target_mult)
                ]
                if not opts:
                    per_source = None
                    break
                per_source.append(opts)
            if per_source is None:
                fallback_choices = None
                break
            fallback_choices.extend(per_source)
        if fallback_choices is None:
            continue

        for fallback_combo in product(*fallback_choices):
            base_links: list[tuple[str, str, str]] = [
                link for group in fallback_combo for link in group
            ]

            # phase 3: options for pure (never-targeted) bases
            pure_choices = []
            for b in pure_bases:
                options = _pure_options(prep, b, individuals, possible)
                if options is None:
                    pure_choices = None
                    break
                pure_choices.append(
                    list(combinations_with_replacement(options, count_of[b]))
                )
            if pure_choices is None:
                continue

            for pure_combo in product(*pure_choices):
                inds = list(individuals)
                links = list(base_links)
                values: dict[tuple[str, str], object] = {}
                prof = dict(profile_of)
                for b, opts in zip(pure_bases, pure_combo):
                    for i, (profile, opt_links, opt_values) in enumerate(opts):
                        ind = f"{b}_{i}"
                        inds.append((ind, b))
                        prof[ind] = profile
                        links.extend((r, ind, t) for r, t in opt_links)
                        values.update({(q, ind): v for q, v in opt_values})

                assembled = _assemble(prep, inds, prof, links)
                if assembled is None:
                    continue
                types, all_links = assembled
                for value_map in _value_choices(prep, inds, types, values):
                    yield _canonicalize(prep, inds, types, all_links, value_map)


def _pure_options(prep: _Prep, base: str, individuals, possible):
    """Per-individual (profile, links, values) options for a pure base."""
    options = []
    for profile in prep.profiles[base]:
        link_parts = []
        dead = False
        for r in prep.stored:
            if r.source not in profile:
                continue
            targets = tuple(ind for ind, _ in individuals if r.target in possible[ind])
            subsets = [
                tuple((r.name, t) for t in chosen)
                for chosen in _target_subsets(targets, r.target_mult)
            ]
            if not subsets:
                dead = True
                break
            link_parts.append(subsets)
        if dead:
            continue
        value_parts = _value_options(prep, profile)
        for link_combo in product(*link_parts):
            flat_links = tuple(l for group in link_combo for l in group)
            for value_combo in value_parts:
                options.append((profile, flat_links, value_combo))
    return sorted(options, key=_option_key) if options else None


def _option_key(option):
    profile, links, values = option
    return (tuple(sorted(profile)), links, values)


def _value_options(prep: _Prep, types: frozenset[str]) -> list[tuple]:
    """All value assignments for one bearer with the given types."""
    per_quality: dict[str, tuple[bool, tuple]] = {}
    for c in prep.value_chars:
        if c.target not in types:
            continue
        required = c.source_mult is not None and c.source_mult.min >= 1
        vals = prep.allowed_values(c.source)
        prev = per_quality.get(c.source)
        if prev is None:
            per_quality[c.source] = (required, vals)
        else:
            per_quality[c.source] = (prev[0] or required, prev[1])
    combos: list[list[tuple[str, object]]] = [[]]
    for quality in sorted(per_quality):
        required, vals = per_quality[quality]
        choices: list[tuple] = [(quality, v) for v in vals]
        extended = []
        for partial in combos:
            for choice in choices:
                extended.append(partial + [choice])
            if not required:
                extended.append(list(partial))
        combos = extended
    return [tuple(c) for c in combos]


def _assemble(prep: _Prep, individuals, profile_of, links):
    """Derive full type sets and material links; None when inconsistent."""
    model = prep.model
    types: dict[str, set[str]] = {
        ind: set(profile_of[ind]) for ind, _ in individuals
    }
    linked_via: dict[str, set[str]] = {c: set() for c in prep.justified}
    by_relation: dict[str, list[tuple[str, str]]] = {}
    for rel, s, t in links:
        by_relation.setdefault(rel, []).append((s, t))
    for classifier, rel_names in prep.defining.items():
        for rn in rel_names:
            for _, t in by_relation.get(rn, ()):
                linked_via[classifier].add(t)
    for classifier in prep.justified:
        closure = model.ancestors_or_self(classifier)
        for ind in linked_via[classifier]:
            types[ind] |= closure

    # justification is an iff: a justified classifier in the closure of the
    # free profile must still be backed by an actual link
    for classifier in prep.justified:
        members = {ind for ind, _ in individuals if classifier in types[ind]}
        if members != linked_via[classifier]:
            return None

    # per-target counts (the source-side multiplicity of each stored relation)
    for r in prep.stored:
        if r.source_mult is None:
            continue
        pairs = by_relation.get(r.name, ())
        incoming: dict[str, int] = {}
        for s, t in pairs:
            incoming[t] = incoming.get(t, 0) + 1
        for ind, _ in individuals:
            if r.target in types[ind]:
                if not r.source_mult.admits(incoming.get(ind, 0)):
                    return None
            elif ind in incoming:
                return None  # linked but not an instance of the target type

    # generalization sets
    for g in model.gensets.values():
        if g.is_disjoint:
            for ind, _ in individuals:
                if sum(1 for s in g.specifics if s in types[ind]) > 1:
                    return None
        if g.is_complete:
            for ind, _ in individuals:
                if g.general in types[ind] and not any(
                    s in types[ind] for s in g.specifics
                ):
                    return None

    # explicit per-classifier scope caps
    for name, cap in prep.scope.per_classifier:
        if sum(1 for ind, _ in individuals if name in types[ind]) > cap:
            return None

    # derived material links
    all_links = list(links)
    for rel, src_meds, tgt_meds in prep.materials:
        relator = rel.derived_from.relator
        relator_instances = [
            ind for ind, _ in individuals if relator in types[ind]
        ]
        derived: dict[tuple[str, str], int] = {}
        for r_ind in relator_instances:
            xs = {
                t for m in src_meds for s, t in by_relation.get(m, ()) if s == r_ind
            }
            ys = {
                t for m in tgt_meds for s, t in by_relation.get(m, ()) if s == r_ind
            }
            for x in xs:
                if rel.source not in types[x]:
                    continue
                for y in ys:
                    if rel.target not in types[y]:
                        continue
                    derived[(x, y)] = derived.get((x, y), 0) + 1
        for n in derived.values():
            if not rel.derived_from.mult.admits(n):
                return None
        outgoing: dict[str, int] = {}
        incoming: dict[str, int] = {}
        for x, y in derived:
            outgoing[x] = outgoing.get(x, 0) + 1
            incoming[y] = incoming.get(y, 0) + 1
        for ind, _ in individuals:
            if rel.source in types[ind] and rel.target_mult is not None:
                if not rel.target_mult.admits(outgoing.get(ind, 0)):
                    return None
            if rel.target in types[ind] and rel.source_mult is not None:
                if not rel.source_mult.admits(incoming.get(ind, 0)):
                    return None
        all_links.extend((rel.name, x, y) for x, y in sorted(derived))

    return {ind: frozenset(ts) for ind, ts in types.items()}, all_links


def _value_choices(prep: _Prep, individuals, types, preset: dict):
    """Complete the value map for bearers not already covered (pure bases)."""
    pending: list[tuple[str, str, bool]] = []
    for c in prep.value_chars:
        required = c.source_mult is not None and c.source_mult.min >= 1
        for ind, _ in individuals:
            if c.target in types[ind] and (c.source, ind) not in preset:
                pending.append((c.source, ind, required))
    # one bearer may be reached through several characterizations of the same
    # quality; dedupe, strongest requirement wins
    merged: dict[tuple[str, str], bool] = {}
    for q, ind, req in pending:
        merged[(q, ind)] = merged.get((q, ind), False) or req
    keys = sorted(merged)
    spaces = [prep.allowed_values(q) for q, _ in keys]
    if not keys:
        yield dict(preset)
        return
    option_lists = []
    for (q, ind), vals in zip(keys, spaces):
        opts: list = list(vals)
        if not merged[(q, ind)]:
            opts.append(_ABSENT)
        option_lists.append(opts)
    for combo in product(*option_lists):
        out = dict(preset)
        for (q, ind), v in zip(keys, combo):
            if v is not _ABSENT:
                out[(q, ind)] = v
        yield out


_ABSENT = object()


# --------------------------------------------------------------------------
# canonicalization
# --------------------------------------------------------------------------

def _canonicalize(prep: _Prep, individuals, types, links, values):
    """Relabel individuals per base to the lexicographically least encoding."""
    by_base: dict[str, list[str]] = {}
    for ind, base in individuals:
        by_base.setdefault(base, []).append(ind)

    out_links: dict[str, list[tuple[str, str, str]]] = {}
    in_links: dict[str, list[tuple[str, str, str]]] = {}
    for rel, s, t in links:
        out_links.setdefault(s, []).append((rel, s, t))
        in_links.setdefault(t, []).append((rel, s, t))
    value_of: dict[str, list[tuple[str, object]]] = {}
    for (q, b), v in values.items():
        value_of.setdefault(b, []).append((q, v))

    color: dict[str, tuple] = {}
    for ind, base in individuals:
        color[ind] = (
            base,
            tuple(sorted(types[ind])),
            tuple(sorted(value_of.get(ind, ()), key=repr)),
        )
    for _ in range(2):
        ranks = {c: i for i, c in enumerate(sorted(set(color.values()), key=repr))}
        new_color = {}
        for ind, _base in individuals:
            new_color[ind] = (
                ranks[color[ind]],
                tuple(sorted((rel, ranks[color[t]]) for rel, _, t in out_links.get(ind, ()))),
                tuple(sorted((rel, ranks[color[s]]) for rel, s, _ in in_links.get(ind, ()))),
            )
        color = new_color

    # bucket per base by final color; permutations only matter inside buckets
    # whose members occur in links (otherwise every order encodes identically)
    orderings: list[list[list[str]]] = []
    base_names = sorted(by_base)
    for base in base_names:
        members = sorted(by_base[base], key=lambda i: (repr(color[i]), i))
        groups: list[list[str]] = []
        for m in members:
            if groups and color[groups[-1][0]] == color[m]:
                groups[-1].append(m)
            else:
                groups.append([m])
        per_group: list[list[list[str]]] = []
        for g in groups:
            if len(g) == 1 or (
                all(i not in out_links and i not in in_links for i in g)
            ):
                per_group.append([g])
            else:
                per_group.append([list(p) for p in permutations(g)])
        combos = [
            [i for group in arrangement for i in group]
            for arrangement in product(*per_group)
        ]
        orderings.append(combos)

    best = None
    for arrangement in product(*orderings):
        rename: dict[str, str] = {}
        new_inds: list[tuple[str, str]] = []
        for base, order in zip(base_names, arrangement):
            for i, old in enumerate(order):
                fresh = f"{base}_{i}"
                rename[old] = fresh
                new_inds.append((fresh, base))
        enc_types = tuple(sorted(
            (rename[ind], tuple(sorted(types[ind]))) for ind, _ in individuals
        ))
        enc_links = tuple(sorted((rel, rename[s], rename[t]) for rel, s, t in links))
        enc_values = tuple(sorted(
            ((q, rename[b], v) for (q, b), v in values.items()),
            key=lambda row: (row[0], row[1], repr(row[2])),
        ))
        enc_inds = tuple(sorted(new_inds))
        key = (enc_inds, enc_types, enc_links, enc_values)
        if best is None or key < best:
            best = key
    enc_inds, enc_types, enc_links, enc_values = best
    world = InstanceWorld(enc_inds, enc_types, enc_links, enc_values)
    return best, world


# --------------------------------------------------------------------------
# validation (independent re-check of every world invariant)
# --------------------------------------------------------------------------

def validate_world(model: Model, world: InstanceWorld, scope: Scope | None = None) -> list[str]:
    """All invariant violations in `world`, as human-readable strings."""
    problems: list[str] = []
    prep = _Prep(model, scope or DEFAULT_SCOPE)
    cls = model.classifiers
    ids = set()
    base_of_ind: dict[str, str] = {}
    for ind, base in world.individuals:
        if ind in ids:
            problems.append(f"duplicate individual id '{ind}'")
        ids.add(ind)
        if base not in cls or prep.base_of.get(base) != base:
            problems.append(f"'{ind}' has non-base classifier '{base}'")
        base_of_ind[ind] = base
    if set(world.types) != ids:
        problems.append("typeAssignments do not cover exactly the declared individuals")
        return problems

    for ind in sorted(ids):
        ts = world.types[ind]
        base = base_of_ind[ind]
        if base not in ts:
            problems.append(f"'{ind}' does not instantiate its base '{base}'")
        for t in sorted(ts):
            if t not in cls:
                problems.append(f"'{ind}' instantiates unknown classifier '{t}'")
                continue
            if base not in prep.bases_of(t):
                problems.append(f"'{ind}' ({base}) cannot instantiate '{t}'")
            for anc in model.ancestors(t):
                if anc not in ts:
                    problems.append(
                        f"'{ind}' instantiates '{t}' but not its ancestor '{anc}'"
                    )
        for t in sorted(ts):
            if t in cls and cls[t].stereotype in NON_SORTALS:
                witnesses = [
                    s for s in ts
                    if s in cls and cls[s].stereotype not in NON_SORTALS
                    and t in model.ancestors(s)
                ]
                if not witnesses:
                    problems.append(f"'{ind}' instantiates '{t}' without a sortal witness")

    link_seen = set()
    by_relation: dict[str, list[tuple[str, str]]] = {}
    for rel, s, t in world.links:
        if (rel, s, t) in link_seen:
            problems.append(f"duplicate link ({rel}, {s}, {t})")
        link_seen.add((rel, s, t))
        decl = model.relations.get(rel)
        if decl is None:
            problems.append(f"link names unknown relation '{rel}'")
            continue
        if decl.stereotype is RelationStereotype.COMPARATIVE:
            problems.append(f"comparative '{rel}' must not carry stored links")
            continue
        if decl.stereotype is RelationStereotype.CHARACTERIZATION \
                and cls.get(decl.source) is not None \
                and cls[decl.source].stereotype is Stereotype.QUALITY:
            problems.append(f"quality characterization '{rel}' is value-bearing, not a link")
            continue
        for end, ind in ((decl.source, s), (decl.target, t)):
            if ind not in ids:
                problems.append(f"link ({rel}) references unknown individual '{ind}'")
            elif end not in world.types[ind]:
                problems.append(f"link ({rel}, {s}, {t}): '{ind}' is not a '{end}'")
        by_relation.setdefault(rel, []).append((s, t))

    # justification: role membership iff a defining link exists
    for classifier, rel_names in sorted(prep.defining.items()):
        linked = {t for rn in rel_names for _, t in by_relation.get(rn, ())}
        members = {i for i in ids if classifier in world.types[i]}
        for extra in sorted(members - linked):
            problems.append(f"'{extra}' instantiates '{classifier}' without a defining link")
        for extra in sorted(linked - members):
            problems.append(f"'{extra}' has a defining link but lacks '{classifier}'")

    # multiplicities of stored and material relations
    for r in sorted(model.relations.values(), key=lambda r: r.name):
        if r.stereotype is RelationStereotype.COMPARATIVE:
            continue
        if r.stereotype is RelationStereotype.CHARACTERIZATION \
                and cls.get(r.source) is not None \
                and cls[r.source].stereotype is Stereotype.QUALITY:
            continue
        pairs = by_relation.get(r.name, [])
        outgoing: dict[str, int] = {}
        incoming: dict[str, int] = {}
        for s, t in pairs:
            outgoing[s] = outgoing.get(s, 0) + 1
            incoming[t] = incoming.get(t, 0) + 1
        for ind in sorted(ids):
            if r.source in world.types[ind] and r.target_mult is not None:
                n = outgoing.get(ind, 0)
                if not r.target_mult.admits(n):
                    problems.append(
                        f"'{ind}' has {n} '{r.name}' links; multiplicity {r.target_mult}"
                    )
            if r.target in world.types[ind] and r.source_mult is not None:
                n = incoming.get(ind, 0)
                if not r.source_mult.admits(n):
                    problems.append(
                        f"'{ind}' is hit by {n} '{r.name}' links; multiplicity {r.source_mult}"
                    )

    # material links are exactly the relator-derived tuples
    for rel, src_meds, tgt_meds in prep.materials:
        relator = rel.derived_from.relator
        derived: dict[tuple[str, str], int] = {}
        for r_ind in sorted(i for i in ids if relator in world.types[i]):
            xs = {t for m in src_meds for s, t in by_relation.get(m, ()) if s == r_ind}
            ys = {t for m in tgt_meds for s, t in by_relation.get(m, ()) if s == r_ind}
            for x in sorted(xs):
                if rel.source not in world.types[x]:
                    continue
                for y in sorted(ys):
                    if rel.target not in world.types[y]:
                        continue
                    derived[(x, y)] = derived.get((x, y), 0) + 1
        stored = set(by_relation.get(rel.name, []))
        if stored != set(derived):
            problems.append(
                f"material '{rel.name}' links differ from the relator-derived tuples"
            )
        for pair, n in sorted(derived.items()):
            if not rel.derived_from.mult.admits(n):
                problems.append(
                    f"tuple {pair} of '{rel.name}' is grounded by {n} relators; "
                    f"derivation multiplicity {rel.derived_from.mult}"
                )

    # quality values
    seen_values = set()
    for q, b, v in world.value_rows:
        if (q, b) in seen_values:
            problems.append(f"duplicate value for ({q}, {b})")
        seen_values.add((q, b))
        if b not in ids:
            problems.append(f"value row names unknown individual '{b}'")
            continue
        space = model.spaces.get(q)
        if space is not None and not space.contains(v):
            problems.append(f"value {v!r} outside the space of '{q}'")
        if scope is not None:
            chosen = scope.values_for(q)
            if chosen is not None and v not in chosen:
                problems.append(f"value {v!r} of '{q}' outside the scope subset")
        bearers_ok = any(
            c.target in world.types[b] for c in prep.value_chars if c.source == q
        )
        if not bearers_ok:
            problems.append(f"'{b}' bears a '{q}' value but no characterization allows it")
    for c in prep.value_chars:
        if c.source_mult is None or c.source_mult.min < 1:
            continue
        for ind in sorted(ids):
            if c.target in world.types[ind] and (c.source, ind) not in seen_values:
                problems.append(f"'{ind}' lacks a required '{c.source}' value")

    # generalization sets
    for g in sorted(model.gensets.values(), key=lambda g: g.name):
        for ind in sorted(ids):
            ts = world.types[ind]
            if g.is_disjoint and sum(1 for s in g.specifics if s in ts) > 1:
                problems.append(f"'{ind}' violates disjointness of '{g.name}'")
            if g.is_complete and g.general in ts and not any(s in ts for s in g.specifics):
                problems.append(f"'{ind}' violates completeness of '{g.name}'")

    # scope caps
    if scope is not None:
        per_base: dict[str, int] = {}
        for ind, base in world.individuals:
            per_base[base] = per_base.get(base, 0) + 1
        for base, n in sorted(per_base.items()):
            if base in prep.family and n > scope.count_for_base(base):
                problems.append(
                    f"{n} individuals of base '{base}' exceed the scope "
                    f"({scope.count_for_base(base)})"
                )
        for name, cap in scope.per_classifier:
            n = sum(1 for i in ids if name in world.types[i])
            if n > cap:
                problems.append(f"{n} instances of '{name}' exceed the scope cap ({cap})")

    return problems


# --------------------------------------------------------------------------
# queries over worlds
# --------------------------------------------------------------------------

def find_witness(model: Model, scope: Scope | None, goal: Goal) -> InstanceWorld | None:
    """Canonically-first in-scope world satisfying the goal, or None.

    Exhaustive regardless of scope.world_limit — a witness search must not
    miss worlds the limit would truncate.
    """
    scope = scope or DEFAULT_SCOPE
    for world in _enumerate_all(model, scope, 14):
        if goal_holds(world, goal):
            return world
    return None


def eval_comparative(
    world: InstanceWorld,
    model: Model,
    relation: str,
    *,
    strict: bool = True,
) -> set[tuple[str, str]]:
    """Pairs (x, y) the comparative yields in this world.

    Both relata need at least one grounded value. Direction desc pairs x over
    y when x's best value beats every value of y (strictly unless `strict`
    is False — the deliberately broken tie-admitting variant).
    """
    rel = model.relations.get(relation)
    if rel is None or rel.stereotype is not RelationStereotype.COMPARATIVE or rel.via is None:
        raise ValueError(f"'{relation}' is not a grounded comparative relation")
    q = rel.via.quality
    space = model.spaces.get(q)
    if space is None or not space.is_ordered:
        raise ValueError(f"quality '{q}' of '{relation}' has no ordered space")
    cls = model.classifiers
    direct_chars = [c for c in model.relations.values()
                    if c.stereotype is RelationStereotype.CHARACTERIZATION and c.source == q]
    mode_chars = [
        c for c in model.relations.values()
        if c.stereotype is RelationStereotype.CHARACTERIZATION
        and cls.get(c.source) is not None
        and cls[c.source].stereotype is Stereotype.MODE
    ]

    def grounded_values(ind: str) -> list:
        ts = world.types[ind]
        out = []
        for c in direct_chars:
            if c.target in ts:
                v = world.values.get((q, ind))
                if v is None:
                    if c.source_mult is not None and c.source_mult.min >= 1:
                        raise MissingQualityValueError(
                            f"'{ind}' lacks a value for '{q}'"
                        )
                else:
                    out.append(v)
                break
        for mc in mode_chars:
            mode = mc.source
            grounding = [
                dc for dc in direct_chars
                if dc.target in model.ancestors_or_self(mode)
            ]
            if not grounding:
                continue
            required = any(
                dc.source_mult is not None and dc.source_mult.min >= 1
                for dc in grounding
            )
            for rel_name, s, t in world.links:
                if rel_name != mc.name or t != ind:
                    continue
                v = world.values.get((q, s))
                if v is None:
                    if required:
                        raise MissingQualityValueError(f"'{s}' lacks a value for '{q}'")
                    continue
                out.append(v)
        return out

    sources = world.extension(rel.source)
    targets = world.extension(rel.target)
    cache = {ind: grounded_values(ind) for ind in set(sources) | set(targets)}
    desc = rel.via.direction.value == "desc"
    pairs: set[tuple[str, str]] = set()
    for x in sources:
        vx = cache[x]
        if not vx:
            continue
        for y in targets:
            vy = cache[y]
            if not vy:
                continue
            if desc:
                hit = max(vx) > max(vy) if strict else max(vx) >= max(vy)
            else:
                hit = min(vx) < min(vy) if strict else min(vx) <= min(vy)
            if hit:
                pairs.add((x, y))
    return pairs


@dataclass(frozen=True)
class MetaReport:
    """Brute-force meta-property verdicts with first counterexamples."""

    relation: str
    irreflexive: bool
    asymmetric: bool
    transitive: bool
    counterexamples: tuple[tuple[str, InstanceWorld, tuple[str, ...]], ...] = ()

    def counterexample(self, prop: str):
        for name, world, ids in self.counterexamples:
            if name == prop:
                return world, ids
        return None

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "irreflexive": self.irreflexive,
            "asymmetric": self.asymmetric,
            "transitive": self.transitive,
            "counterexamples": [
                {"property": name, "world": world.to_dict(), "individuals": list(ids)}
                for name, world, ids in self.counterexamples
            ],
        }


def check_metaproperties(
    model: Model,
    relation: str,
    scope: Scope | None = None,
    *,
    strict: bool = True,
) -> MetaReport:
    """Test irreflexivity/asymmetry/transitivity over every in-scope world."""
    scope = scope or DEFAULT_SCOPE
    rel = model.relations.get(relation)
    if rel is None:
        raise ValueError(f"no relation named '{relation}'")
    if rel.stereotype not in (RelationStereotype.COMPARATIVE, RelationStereotype.INTERNAL):
        raise ValueError(
            f"'{relation}' is {rel.stereotype.value}; meta-properties apply to "
            "comparative or internal relations"
        )
    counter: dict[str, tuple[InstanceWorld, tuple[str, ...]]] = {}
    for world in _enumerate_all(model, scope, 14):
        if rel.stereotype is RelationStereotype.COMPARATIVE:
            pairs = eval_comparative(world, model, relation, strict=strict)
        else:
            pairs = {(s, t) for r, s, t in world.links if r == relation}
        if "irreflexive" not in counter:
            for x, y in sorted(pairs):
                if x == y:
                    counter["irreflexive"] = (world, (x,))
                    break
        if "asymmetric" not in counter:
            for x, y in sorted(pairs):
                if (y, x) in pairs:
                    counter["asymmetric"] = (world, (x, y))
                    break
        if "transitive" not in counter:
            done = False
            for x, y in sorted(pairs):
                for y2, z in sorted(pairs):
                    if y2 == y and (x, z) not in pairs:
                        counter["transitive"] = (world, (x, y, z))
                        done = True
                        break
                if done:
                    break
        if len(counter) == 3:
            break
    return MetaReport(
        relation=relation,
        irreflexive="irreflexive" not in counter,
        asymmetric="asymmetric" not in counter,
        transitive="transitive" not in counter,
        counterexamples=tuple(
            (name, world, ids) for name, (world, ids) in sorted(counter.items())
        ),
    )


__all__ = [
    "Scope",
    "DEFAULT_SCOPE",
    "InstanceWorld",
    "EMPTY_WORLD",
    "Goal",
    "goal_holds",
    "enumerate_worlds",
    "validate_world",
    "find_witness",
    "eval_comparative",
    "MetaReport",
    "check_metaproperties",
]
