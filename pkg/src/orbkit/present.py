"""Presented groupoids: generators, relations, coset enumeration, hom solving."""

from . import core
from .errors import (
    BudgetExceeded,
    GroupoidError,
    ParseError,
    PreconditionFailed,
    SizeLimit,
)

DEFAULT_COSET_BUDGET = 10 ** 4
DEFAULT_SOLVE_BUDGET = 10 ** 6
FOREST_CAP = 10 ** 3


class GroupoidPresentation:
    """Generators with endpoints plus closed relation words.

    A word is a tuple of nonzero signed 1-based generator ids, read left to
    right in traversal order: +g crosses g from src to tgt, -g crosses it
    backwards.  Every relation must trace a closed path.  `contractible`
    marks generator ids (0-based) eligible for forest contraction.
    """

    def __init__(self, n_vertices, gen_src, gen_tgt, relations,
                 gen_labels=None, contractible=()):
        self.n_vertices = n_vertices
        self.gen_src = tuple(gen_src)
        self.gen_tgt = tuple(gen_tgt)
        self.n_gens = len(self.gen_src)
        if len(self.gen_tgt) != self.n_gens:
            raise GroupoidError("generator endpoint lists differ in length")
        for v in self.gen_src + self.gen_tgt:
            if not (0 <= v < n_vertices):
                raise GroupoidError("generator endpoint out of range")
        if gen_labels is None:
            gen_labels = ["g%d" % i for i in range(self.n_gens)]
        self.gen_labels = tuple(gen_labels)
        self.relations = tuple(tuple(w) for w in relations)
        self.contractible = tuple(sorted(set(contractible)))
        for g in self.contractible:
            if not (0 <= g < self.n_gens):
                raise GroupoidError("contractible id out of range")
        for word in self.relations:
            self.validate_word(word, closed=True)

    def letter_ends(self, letter):
        """(from, to) vertices of one signed letter."""
        if letter == 0 or abs(letter) > self.n_gens:
            raise ParseError(letter, "letter out of range")
        g = abs(letter) - 1
        if letter > 0:
            return self.gen_src[g], self.gen_tgt[g]
        return self.gen_tgt[g], self.gen_src[g]

    def validate_word(self, word, closed=False):
        """Endpoint-check a word; returns (src, tgt)."""
        if not word:
            raise ParseError(word, "empty word has no endpoints")
        start, at = self.letter_ends(word[0])
        for letter in word[1:]:
            a, b = self.letter_ends(letter)
            if a != at:
                raise ParseError(letter, "word breaks at vertex %d" % at)
            at = b
        if closed and at != start:
            raise ParseError(word, "relation word is not a closed path")
        return start, at

    def components(self):
        """Vertex partition under the generator graph."""
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in range(self.n_gens):
            a, b = find(self.gen_src[g]), find(self.gen_tgt[g])
            if a != b:
                parent[max(a, b)] = min(a, b)
        buckets = {}
        for v in range(self.n_vertices):
            buckets.setdefault(find(v), []).append(v)
        return [tuple(buckets[r]) for r in sorted(buckets)]


def invert_word(word):
    """Reverse the path."""
    return tuple(-letter for letter in reversed(word))


def contract_forest(pres, cap=FOREST_CAP):
    """Collapse a maximal forest of contractible generators to identities.

    Deterministic: candidates are scanned in ascending id and kept when they
    join two distinct trees.  Returns (presentation, vertex_map, gen_map)
    where gen_map[g] is the surviving id or None for contracted generators.
    """
    parent = list(range(pres.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    dropped = set()
    for g in pres.contractible:
        if len(dropped) >= cap:
            break
        a, b = find(pres.gen_src[g]), find(pres.gen_tgt[g])
        if a != b:
            parent[max(a, b)] = min(a, b)
            dropped.add(g)
    reps = sorted({find(v) for v in range(pres.n_vertices)})
    rep_id = {r: i for i, r in enumerate(reps)}
    vertex_map = tuple(rep_id[find(v)] for v in range(pres.n_vertices))

    gen_map = [None] * pres.n_gens
    src, tgt, labels = [], [], []
    for g in range(pres.n_gens):
        if g in dropped:
            continue
        gen_map[g] = len(src)
        src.append(vertex_map[pres.gen_src[g]])
        tgt.append(vertex_map[pres.gen_tgt[g]])
        labels.append(pres.gen_labels[g])

    relations = []
    seen = set()
    for word in pres.relations:
        out = []
        for letter in word:
            g = abs(letter) - 1
            if gen_map[g] is None:
                continue
            out.append((gen_map[g] + 1) if letter > 0 else -(gen_map[g] + 1))
        out = tuple(out)
        if out and out not in seen:
            seen.add(out)
            relations.append(out)
    contractible = tuple(gen_map[g] for g in pres.contractible
                         if gen_map[g] is not None)
    small = GroupoidPresentation(len(reps), src, tgt, relations,
                                 gen_labels=labels, contractible=contractible)
    return small, vertex_map, tuple(gen_map)


def todd_coxeter(n_gens, relations, budget=DEFAULT_COSET_BUDGET):
    """Coset table of the trivial subgroup for a group presentation.

    Relations are signed words over 1..n_gens.  Returns (n, act) where act
    maps (coset, signed letter) to a coset and coset 0 is the unit; the
    cosets enumerate the group elements.  Raises BudgetExceeded when the
    live table would pass `budget` cosets.
    """
    cols = 2 * n_gens

    def col(letter):
        i = abs(letter) - 1
        return 2 * i if letter > 0 else 2 * i + 1

    table = [[None] * cols]
    parent = [0]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def new_coset():
        if len(table) >= 8 * budget:
            raise BudgetExceeded("todd_coxeter", len(table))
        table.append([None] * cols)
        parent.append(len(table) - 1)
        return len(table) - 1

    def merge(a, b):
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if y < x:
                x, y = y, x
            parent[y] = x
            for k in range(cols):
                ty = table[y][k]
                if ty is None:
                    continue
                tx = table[x][k]
                if tx is None:
                    table[x][k] = ty
                else:
                    queue.append((tx, ty))

    def set_entry(c, k, d):
        c, d = find(c), find(d)
        e = table[c][k]
        if e is not None:
            merge(e, d)
            return
        table[c][k] = d
        d = find(d)
        e = table[d][k ^ 1]
        if e is not None:
            merge(e, c)
        else:
            table[d][k ^ 1] = c

    def scan_and_fill(c, word):
        while True:
            f, i = find(c), 0
            b, j = find(c), len(word)
            while i < j:
                nxt = table[f][col(word[i])]
                if nxt is None:
                    break
                f, i = find(nxt), i + 1
            if i == j:
                merge(f, b)
                return
            while j > i:
                prv = table[b][col(word[j - 1]) ^ 1]
                if prv is None:
                    break
                b, j = find(prv), j - 1
            if j == i:
                merge(f, b)
                return
            if j == i + 1:
                set_entry(f, col(word[i]), b)
                return
            set_entry(f, col(word[i]), new_coset())

    idx = 0
    while idx < len(table):
        if find(idx) != idx:
            idx += 1
            continue
        for word in relations:
            if find(idx) != idx:
                break
            scan_and_fill(idx, word)
        if find(idx) == idx:
            for k in range(cols):
                if table[idx][k] is None:
                    set_entry(idx, k, new_coset())
        live = sum(1 for c in range(len(table)) if find(c) == c)
        if live > budget:
            raise BudgetExceeded("todd_coxeter", live)
        idx += 1

    live = sorted(c for c in range(len(table)) if find(c) == c)
    relabel = {c: i for i, c in enumerate(live)}

    def act(c, letter):
        return relabel[find(table[live[c]][col(letter)])]

    return len(live), act


def group_from_cosets(n, act, n_gens, validate=None):
    """Regular coset action to a FinGroup; mul[x][y] applies y's word first."""
    word_for = [None] * n
    word_for[0] = ()
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            for letter in range(1, n_gens + 1):
                for signed in (letter, -letter):
                    d = act(c, signed)
                    if word_for[d] is None:
                        word_for[d] = word_for[c] + (signed,)
                        nxt.append(d)
        frontier = nxt
    if any(w is None for w in word_for):
        raise GroupoidError("coset action is not transitive")

    def trace(c, word):
        for letter in word:
            c = act(c, letter)
        return c

    mul = [[trace(y, word_for[x]) for y in range(n)] for x in range(n)]
    if validate is None:
        validate = n <= 64
    grp = core.FinGroup(mul, validate=validate)
    if not validate:
        # the table is a right action read off a closed coset table; spot
        # check associativity on a deterministic sample instead of n^3
        step = max(1, n // 11)
        sample = range(0, n, step)
        for a in sample:
            for b in sample:
                for c in sample:
                    if grp.mul[grp.mul[a][b]][c] != grp.mul[a][grp.mul[b][c]]:
                        raise GroupoidError("coset table not associative")
    return grp, word_for


class MaterializedGroupoid(core.FinGroupoid):
    """Finite groupoid realizing a presentation, with word evaluation."""

    def __init__(self, pres, budget=DEFAULT_COSET_BUDGET):
        self.presentation = pres
        comps = pres.components()
        comp_of = [None] * pres.n_vertices
        for ci, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = ci

        # spanning tree per component over the generator graph
        tree_word = [None] * pres.n_vertices
        in_tree = set()
        for comp in comps:
            base = comp[0]
            tree_word[base] = ()
            frontier = [base]
            reached = {base}
            while frontier:
                nxt = []
                for v in frontier:
                    for g in range(pres.n_gens):
                        if pres.gen_src[g] == v and pres.gen_tgt[g] not in reached:
                            w = pres.gen_tgt[g]
                            reached.add(w)
                            in_tree.add(g)
                            tree_word[w] = tree_word[v] + (g + 1,)
                            nxt.append(w)
                        elif pres.gen_tgt[g] == v and pres.gen_src[g] not in reached:
                            w = pres.gen_src[g]
                            reached.add(w)
                            in_tree.add(g)
                            tree_word[w] = tree_word[v] + (-(g + 1),)
                            nxt.append(w)
                frontier = nxt

        # loop generators and rewritten relations per component; conjugating
        # a relation to the base point only adds tree letters, so rewriting
        # along the tree is deletion of tree letters
        self._groups = []
        self._gen_elem = []
        for ci, comp in enumerate(comps):
            loops = [g for g in range(pres.n_gens)
                     if g not in in_tree and comp_of[pres.gen_src[g]] == ci]
            slot = {g: i + 1 for i, g in enumerate(loops)}
            rels = []
            for word in pres.relations:
                a, _ = pres.validate_word(word)
                if comp_of[a] != ci:
                    continue
                out = tuple((slot[abs(l) - 1] if l > 0 else -slot[abs(l) - 1])
                            for l in word if abs(l) - 1 in slot)
                if out:
                    rels.append(out)
            n, act = todd_coxeter(len(loops), rels, budget=budget)
            grp, _ = group_from_cosets(n, act, len(loops))
            self._groups.append(grp)
            self._gen_elem.append({g: act(0, slot[g]) for g in loops})

        self._comp_of = tuple(comp_of)
        self._comps = comps
        self._tree_word = tuple(tree_word)

        arrows = []
        index = {}
        for u in range(pres.n_vertices):
            grp = self._groups[comp_of[u]]
            for v in comps[comp_of[u]]:
                for k in range(grp.n):
                    index[(u, k, v)] = len(arrows)
                    arrows.append((u, k, v))
        total = len(arrows)
        if total > 10 ** 6:
            raise SizeLimit("materialize", total)
        self._triple = tuple(arrows)
        self._triple_index = index

        src = [a[0] for a in arrows]
        tgt = [a[2] for a in arrows]
        ident = [index[(v, self._groups[comp_of[v]].unit, v)]
                 for v in range(pres.n_vertices)]
        inv = []
        for (u, k, v) in arrows:
            grp = self._groups[comp_of[u]]
            inv.append(index[(v, grp.inv[k], u)])
        comp_table = {}
        for bi, (u, k1, v) in enumerate(arrows):
            grp = self._groups[comp_of[u]]
            for w in comps[comp_of[u]]:
                for k2 in range(grp.n):
                    ai = index[(v, k2, w)]
                    comp_table[(ai, bi)] = index[(u, grp.mul[k2][k1], w)]
        super().__init__(pres.n_vertices, src, tgt, comp_table, ident, inv,
                         arrow_labels=self._triple)

    def class_of(self, letter):
        """Loop-group element and endpoints of one signed letter."""
        pres = self.presentation
        g = abs(letter) - 1
        ci = self._comp_of[pres.gen_src[g]]
        grp = self._groups[ci]
        k = self._gen_elem[ci].get(g, grp.unit)
        a, b = pres.letter_ends(letter)
        if letter < 0:
            k = grp.inv[k]
        return a, k, b

    def gen_arrow(self, g):
        """Arrow id realizing generator g."""
        return self.eval_word((g + 1,))

    def vertex_object(self, v):
        """Object id of a presentation vertex."""
        return v

    def eval_word(self, word):
        """Arrow id traced by a word."""
        pres = self.presentation
        a, at = pres.validate_word(word)
        grp = self._groups[self._comp_of[a]]
        k = grp.unit
        for letter in word:
            _, kl, _ = self.class_of(letter)
            k = grp.mul[kl][k]
        return self._triple_index[(a, k, at)]


def materialize(pres, budget=DEFAULT_COSET_BUDGET):
    """Finite groupoid presented by pres; BudgetExceeded when not desk-size."""
    return MaterializedGroupoid(pres, budget=budget)


def groupoid_presentation(g):
    """One generator per arrow, one relation per composition table entry."""
    rels = []
    for (a2, a1), c in sorted(g.comp.items()):
        rels.append((a1 + 1, a2 + 1, -(c + 1)))
    return GroupoidPresentation(g.n_objects, g.src, g.tgt, rels,
                                gen_labels=g.arrow_labels)


class HomSolution:
    """Functors from a presented groupoid to a finite one.

    `assignments` lists (vertex_images, gen_images) pairs in lexicographic
    order over the solved presentation, which is the forest-contracted one
    when normalized.  vertex_map / gen_map translate from the original
    presentation; a contracted generator maps to None (its image is forced
    to an identity).
    """

    def __init__(self, presentation, target, assignments, normalized,
                 vertex_map, gen_map):
        self.presentation = presentation
        self.target = target
        self.assignments = tuple(assignments)
        self.normalized = normalized
        self.vertex_map = vertex_map
        self.gen_map = gen_map
        self._gpd = None

    @property
    def count(self):
        return len(self.assignments)

    def transformation_groupoid(self, budget=DEFAULT_SOLVE_BUDGET):
        """Groupoid of solutions and pointwise-natural families between them."""
        if self._gpd is not None:
            return self._gpd
        pres, w = self.presentation, self.target
        sols = self.assignments
        touched = [[] for _ in range(pres.n_vertices)]
        for g in range(pres.n_gens):
            v = max(pres.gen_src[g], pres.gen_tgt[g])
            touched[v].append(g)

        arrows = []
        nodes = 0
        for fi, (fo, fg) in enumerate(sols):
            for fj, (po, pg) in enumerate(sols):
                family = [None] * pres.n_vertices

                def extend(v):
                    nonlocal nodes
                    if v == pres.n_vertices:
                        arrows.append((fi, fj, tuple(family)))
                        return
                    for t in w.hom(fo[v], po[v]):
                        nodes += 1
                        if nodes > budget:
                            raise BudgetExceeded("transformation_groupoid",
                                                 len(arrows))
                        family[v] = t
                        ok = True
                        for g in touched[v]:
                            a, b = pres.gen_src[g], pres.gen_tgt[g]
                            if w.comp[(family[b], fg[g])] != \
                                    w.comp[(pg[g], family[a])]:
                                ok = False
                                break
                        if ok:
                            extend(v + 1)
                    family[v] = None

                extend(0)

        index = {a: i for i, a in enumerate(arrows)}
        src = [a[0] for a in arrows]
        tgt = [a[1] for a in arrows]
        ident = []
        for fi, (fo, fg) in enumerate(sols):
            ident.append(index[(fi, fi, tuple(w.ident[x] for x in fo))])
        inv = [index[(b, a, tuple(w.inv[t] for t in fam))]
               for (a, b, fam) in arrows]
        comp = {}
        by_src = {}
        for ai, a in enumerate(arrows):
            by_src.setdefault(a[0], []).append(ai)
        for bi, (f1, f2, t1) in enumerate(arrows):
            for ai in by_src[f2]:
                _, f3, t2 = arrows[ai]
                fam = tuple(w.comp[(t2[v], t1[v])]
                            for v in range(pres.n_vertices))
                comp[(ai, bi)] = index[(f1, f3, fam)]
        self._gpd = core.FinGroupoid(len(sols), src, tgt, comp, ident, inv,
                                     arrow_labels=arrows)
        return self._gpd


def hom_solver(pres, w, normalize=True, budget=DEFAULT_SOLVE_BUDGET,
               max_count=None):
    """Functors pres -> w by backtracking with single-unknown propagation.

    normalize=True first contracts a maximal forest of the presentation's
    contractible generators, which changes the solution count but not the
    equivalence class of the solution groupoid.
    """
    vertex_map = tuple(range(pres.n_vertices))
    gen_map = tuple(range(pres.n_gens))
    if normalize:
        pres, vertex_map, gen_map = contract_forest(pres)

    m = pres.n_gens
    rel_of_gen = [[] for _ in range(m)]
    for ri, word in enumerate(pres.relations):
        for l in {abs(x) for x in word}:
            rel_of_gen[l - 1].append(ri)
    rel_src = [pres.validate_word(word)[0] for word in pres.relations]
    touched = [[] for _ in range(pres.n_vertices)]
    for g in range(m):
        v = max(pres.gen_src[g], pres.gen_tgt[g])
        touched[v].append(g)

    obj_image = [None] * pres.n_vertices
    gen_image = [None] * m
    solutions = []
    nodes = 0

    def fold(letters):
        cur = None
        for l in letters:
            a = gen_image[abs(l) - 1]
            if l < 0:
                a = w.inv[a]
            cur = a if cur is None else w.comp[(a, cur)]
        return cur

    def check_or_solve(ri, trail):
        word = pres.relations[ri]
        missing = [i for i, l in enumerate(word)
                   if gen_image[abs(l) - 1] is None]
        if not missing:
            return fold(word) == w.ident[obj_image[rel_src[ri]]]
        if len(missing) > 1:
            return True
        p = missing[0]
        g = abs(word[p]) - 1
        if sum(1 for l in word if abs(l) - 1 == g) != 1:
            return True
        base = w.ident[obj_image[rel_src[ri]]]
        prefix = fold(word[:p])
        suffix = fold(word[p + 1:])
        if prefix is None:
            prefix = base
        if suffix is None:
            suffix = base
        # prefix . unknown . suffix closes up, so the unknown is the
        # reversed prefix followed by the reversed suffix
        val = w.comp[(w.inv[suffix], w.inv[prefix])]
        if word[p] < 0:
            val = w.inv[val]
        if w.src[val] != obj_image[pres.gen_src[g]] or \
                w.tgt[val] != obj_image[pres.gen_tgt[g]]:
            return False
        return assign(g, val, trail)

    def assign(g, a, trail):
        nonlocal nodes
        if gen_image[g] is not None:
            return gen_image[g] == a
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("hom_solver", len(solutions))
        gen_image[g] = a
        trail.append(g)
        for ri in rel_of_gen[g]:
            if not check_or_solve(ri, trail):
                return False
        return True

    def extend_gen(gi):
        while gi < m and gen_image[gi] is not None:
            gi += 1
        if gi == m:
            solutions.append((tuple(obj_image), tuple(gen_image)))
            if max_count is not None and len(solutions) > max_count:
                raise SizeLimit("hom_solver", len(solutions))
            return
        for a in w.hom(obj_image[pres.gen_src[gi]],
                       obj_image[pres.gen_tgt[gi]]):
            trail = []
            if assign(gi, a, trail):
                extend_gen(gi + 1)
            for g in reversed(trail):
                gen_image[g] = None

    def extend_obj(v):
        nonlocal nodes
        if v == pres.n_vertices:
            extend_gen(0)
            return
        for x in range(w.n_objects):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("hom_solver", len(solutions))
            if any(not w.hom(obj_image[pres.gen_src[g]] if pres.gen_src[g] != v else x,
                             obj_image[pres.gen_tgt[g]] if pres.gen_tgt[g] != v else x)
                   for g in touched[v]):
                continue
            obj_image[v] = x
            extend_obj(v + 1)
        obj_image[v] = None

    extend_obj(0)
    solutions.sort()
    return HomSolution(pres, w, solutions, normalize, vertex_map, gen_map)
