"""
Group presentations and free-word enumeration.

Generators carry short labels; the inverse of ``a`` is written ``a^-1`` and never
stored. Words are tuples of signed letters: ``+(i+1)`` for generator ``i`` and
``-(i+1)`` for its inverse.
"""

import cmath
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ..utils.errors import ConfigError, InsufficientSample, NoFuchsianModel
from ..utils.tolerances import Tolerances
from .moebius import MapSet, MoebiusMap, matrix_sqrt
from .pointsets import one_sided_hausdorff
from .polygon import side_of

logger = logging.getLogger(__name__)

INVERSE_SUFFIX = '^-1'
PRUNE = 'prune'
MAX_DEPTH = 20

# Bounds for the closure used in generator reduction
CLOSURE_DEPTH = 4
CLOSURE_SIZE = 4000


def inverse_label(label):
    return label + INVERSE_SUFFIX


@dataclass(frozen=True)
class Word:
    """A freely reduced word with its cached map."""
    letters: tuple
    map: MoebiusMap

    def __len__(self):
        return len(self.letters)

    @property
    def is_empty(self):
        return len(self.letters) == 0

    def text(self, spec):
        if not self.letters:
            return 'e'
        return ' '.join(spec.letter_text(x) for x in self.letters)

    def __repr__(self):
        return f"Word({self.letters})"


def reduce(letters):
    """Free reduction of a letter sequence (or Word, keeping its map)."""
    if isinstance(letters, Word):
        return Word(reduce(letters.letters), letters.map)
    stack = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def invert_letters(letters):
    return tuple(-x for x in reversed(letters))


@dataclass(frozen=True)
class GroupSpec:
    """
    Labeled generators plus the bookkeeping needed by later stages.

    Parameters:
    -----------
    generators : tuple
        Pairs ``(label, MoebiusMap)``.
    adjunctions : tuple
        Labels whose square roots were adjoined, in order of adjunction.
    fuchsian_model : dict
        Label to real MoebiusMap giving the Fuchsian model image of ``g ** model_powers[label]``.
    model_powers : dict
        Power of each generator whose model image is known (2 after one adjunction).
    expansions : dict
        For subgroups, label to the letters of the root group it stands for.
    """
    generators: tuple
    adjunctions: tuple = ()
    fuchsian_model: dict = field(default_factory=dict)
    model_powers: dict = field(default_factory=dict)
    expansions: dict = field(default_factory=dict)
    name: str = ''

    def __post_init__(self):
        labels = [label for label, _ in self.generators]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"Generator labels must be unique, got {labels}")
        for label, g in self.generators:
            if not label or label.endswith(INVERSE_SUFFIX) or any(ch.isspace() for ch in label):
                raise ConfigError(f"Invalid generator label {label!r}")
            if g.is_identity():
                raise ConfigError(f"Generator '{label}' is the identity")
        for label, m in self.fuchsian_model.items():
            if label not in labels:
                raise ConfigError(f"Fuchsian model names unknown generator '{label}'")
            if not m.is_real():
                raise ConfigError(f"Fuchsian model map for '{label}' is not real")

    # -- letters ------------------------------------------------------------

    @property
    def labels(self):
        return [label for label, _ in self.generators]

    @property
    def rank(self):
        return len(self.generators)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise ConfigError(f"Unknown generator label '{label}'")

    def letter_text(self, x):
        label = self.generators[abs(x) - 1][0]
        return label if x > 0 else inverse_label(label)

    def letter_map(self, x):
        g = self.generators[abs(x) - 1][1]
        return g if x > 0 else g.inverse()

    def word(self, letters):
        """Build a reduced Word with a freshly multiplied map."""
        letters = reduce(letters)
        m = MoebiusMap.identity()
        for x in letters:
            m = m @ self.letter_map(x)
        return Word(letters, m)

    def parse(self, text):
        """Parse ``"a b^-1 a"`` into a Word; ``e`` or the empty string is the identity."""
        letters = []
        for token in text.split():
            if token == 'e':
                continue
            inverse = token.endswith(INVERSE_SUFFIX)
            label = token[:-len(INVERSE_SUFFIX)] if inverse else token
            i = self.index(label) + 1
            letters.append(-i if inverse else i)
        return self.word(letters)

    def identity_word(self):
        return Word((), MoebiusMap.identity())

    def generator_words(self):
        return [self.word((i + 1,)) for i in range(self.rank)]

    # -- subgroups ----------------------------------------------------------

    def root_letters(self, letters):
        """Letters of the root group (before any subgroup construction) for a word here."""
        if not self.expansions:
            return reduce(letters)
        out = []
        for x in letters:
            base = self.expansions[self.generators[abs(x) - 1][0]]
            out.extend(base if x > 0 else invert_letters(base))
        return reduce(out)

    def subgroup(self, words, prefix='w'):
        """The subgroup generated by ``words``; its words expand back to root letters."""
        generators = []
        expansions = {}
        for i, w in enumerate(words):
            label = f"{prefix}{i}"
            generators.append((label, w.map))
            expansions[label] = self.root_letters(w.letters)
        return GroupSpec(tuple(generators), expansions=expansions, name=f"{self.name}/sub")

    # -- Fuchsian model -----------------------------------------------------

    @property
    def has_model(self):
        return bool(self.fuchsian_model)

    def model_map(self, letters, root_stabilizes=()):
        """
        Fuchsian model image of a word in root letters.

        A generator whose model is only known for its square (after adjunction) must
        appear in runs of even length, unless its label is in ``root_stabilizes``, in
        which case its model is the real square root of the known image.

        Raises
        ------
        NoFuchsianModel
            When some letter has no model image.
        """
        models = {}
        for label, m in self.fuchsian_model.items():
            power = self.model_powers.get(label, 1)
            if label in root_stabilizes:
                while power > 1 and power % 2 == 0:
                    m = matrix_sqrt(m)
                    power //= 2
            models[label] = (m, power)

        result = MoebiusMap.identity()
        runs = []
        for x in letters:
            if runs and runs[-1][0] == x:
                runs[-1][1] += 1
            else:
                runs.append([x, 1])
        for x, count in runs:
            label = self.generators[abs(x) - 1][0]
            if label not in models:
                raise NoFuchsianModel(f"Generator '{label}' has no Fuchsian model image")
            m, power = models[label]
            if count % power:
                raise NoFuchsianModel(
                    f"Run of {count} letters '{self.letter_text(x)}' is not a multiple of {power}; "
                    f"the adjoined root does not act on the modelled component")
            step = m if x > 0 else m.inverse()
            result = result @ step.power(count // power)
        return result


def adjoin_sqrt(spec, label, twist=False):
    """
    Replace generator ``label`` by a square root γ.

    The old generator is γ² (or -γ² as a matrix with ``twist``). A Fuchsian model
    entry for the label keeps describing the old generator, so its power doubles.
    """
    i = spec.index(label)
    g = spec.generators[i][1]
    gamma = matrix_sqrt(g, twist=twist)
    generators = list(spec.generators)
    generators[i] = (label, gamma)
    powers = dict(spec.model_powers)
    if label in spec.fuchsian_model:
        powers[label] = powers.get(label, 1) * 2
    logger.info(f"Adjoined square root of '{label}' (twist={twist}), trace {gamma.trace():.6g}")
    return replace(spec, generators=tuple(generators),
                   adjunctions=spec.adjunctions + (label,), model_powers=powers)


def grandma_recipe(ta, tb, root='minus'):
    """
    Generators a, b of a punctured-torus group with tr a = ta, tr b = tb and tr[a, b] = -2.

    ``tab`` solves x² - ta·tb·x + ta² + tb² = 0; ``root`` picks the sign of the
    square root. Real traces ta = tb = 3 give a group preserving the unit circle.
    """
    ta, tb = complex(ta), complex(tb)
    s = cmath.sqrt(ta * ta * tb * tb - 4 * (ta * ta + tb * tb))
    tab = (ta * tb - s) / 2 if root == 'minus' else (ta * tb + s) / 2
    z0 = (tab - 2) * tb / (tb * tab - 2 * ta + 2j * tab)
    a = MoebiusMap.from_entries(
        ta / 2, (ta * tab - 2 * tb + 4j) / ((2 * tab + 4) * z0),
        (ta * tab - 2 * tb - 4j) * z0 / (2 * tab - 4), ta / 2)
    b = MoebiusMap.from_entries((tb - 2j) / 2, tb / 2, tb / 2, (tb + 2j) / 2)
    return a, b


def commutator(f, g):
    """f g f⁻¹ g⁻¹."""
    return f @ g @ f.inverse() @ g.inverse()


# -- enumeration ----------------------------------------------------------------


def _children(rank, last):
    for i in range(1, rank + 1):
        for x in (i, -i):
            if x != -last:
                yield x


def iter_words(spec, max_len, visitor=None, prefix=()):
    """
    Depth-first traversal of the freely reduced words of length ≤ ``max_len``.

    Children are visited in generator order a, a⁻¹, b, b⁻¹, ... . The visitor is
    called with ``(word, radius)`` where radius is the chordal radius bound of the
    word's image disc; returning ``PRUNE`` skips every extension of the word.
    """
    if max_len < 0:
        raise ValueError(f"max_len must be non-negative, got {max_len}")
    start = spec.word(prefix)
    stack = [start]
    while stack:
        w = stack.pop()
        yield w
        verdict = visitor(w, w.map.contraction_radius()) if visitor else None
        if verdict == PRUNE or len(w) >= max_len:
            continue
        last = w.letters[-1] if w.letters else 0
        kids = [Word(w.letters + (x,), w.map @ spec.letter_map(x)) for x in _children(spec.rank, last)]
        stack.extend(reversed(kids))


def enumerate_words(spec, max_len, visitor=None, threads=1, harvest=None):
    """
    All words of ``iter_words`` as a list, in depth-first order.

    With several threads each top-level letter is traversed by its own worker and
    the results are concatenated in letter order, which reproduces the serial order.
    ``harvest`` maps each word to what is kept of it. Words it maps to None are
    dropped as soon as they are visited, so only the harvest is held in memory.
    """
    keep = harvest or (lambda w: w)

    def walk(prefix=()):
        return [item for item in map(keep, iter_words(spec, max_len, visitor, prefix=prefix))
                if item is not None]

    if threads <= 1 or max_len == 0:
        return walk()

    root = spec.identity_word()
    head = keep(root)
    out = [] if head is None else [head]
    if visitor is not None and visitor(root, root.map.contraction_radius()) == PRUNE:
        return out
    prefixes = [(x,) for x in _children(spec.rank, 0)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(walk, prefixes))
    for part in parts:
        out.extend(part)
    return out


def word_count(rank, max_len):
    """Number of reduced words of length ≤ max_len in a free group of the given rank."""
    return 1 + sum(2 * rank * (2 * rank - 1) ** (k - 1) for k in range(1, max_len + 1))


# -- stabilizers ----------------------------------------------------------------


def maps_component(word, src, dst, tol=None):
    """
    Numeric test that ``word`` carries component ``src`` onto component ``dst``.

    The image of src's boundary sample must lie within ``tau_stab`` (one-sided
    chordal Hausdorff) of dst's sample, and when dst's sample is cyclically ordered
    the image of src's interior witness must be on the same side as dst's witness.

    Raises
    ------
    InsufficientSample
        If either boundary sample has fewer than ``n_min`` points.
    """
    tol = tol or Tolerances()
    for comp in (src, dst):
        if len(comp.quasicircle.points) < tol.n_min:
            raise InsufficientSample(f"Component {comp.id} has {len(comp.quasicircle.points)} "
                                     f"boundary points, need {tol.n_min}")
    f = word.map
    if src is dst and f.is_identity(tol.tau_tr):
        return True
    source = np.asarray(src.quasicircle.points, dtype=complex)
    target = np.asarray(dst.quasicircle.points, dtype=complex)
    if one_sided_hausdorff(f.apply_array(source), target) > tol.tau_stab:
        return False
    q = dst.quasicircle
    if q.ordered and src.interior_witness is not None and dst.interior_witness is not None:
        here = side_of(target, q.pole, dst.interior_witness)
        there = side_of(target, q.pole, f(src.interior_witness))
        return here == there
    return True


def stabilizer_membership(word, comp, tol=None):
    """
    Numeric stabilizer test: ``word`` carries the component onto itself.

    Raises
    ------
    InsufficientSample
        If the quasicircle sample has fewer than ``n_min`` points.
    """
    return maps_component(word, comp, comp, tol)


def closure_maps(maps, depth=CLOSURE_DEPTH, limit=CLOSURE_SIZE):
    """Products of ``maps`` and their inverses up to ``depth`` factors, as a MapSet."""
    gens = []
    for m in maps:
        gens.extend([m, m.inverse()])
    seen = MapSet([MoebiusMap.identity()])
    frontier = deque([MoebiusMap.identity()])
    for _ in range(depth):
        nxt = deque()
        for g in frontier:
            for h in gens:
                k = g @ h
                if seen.add(k):
                    nxt.append(k)
                    if len(seen) >= limit:
                        return seen
        frontier = nxt
    return seen


def reduce_generators(words, depth=CLOSURE_DEPTH):
    """
    Drop words that are products of earlier accepted ones.

    Words are considered shortest first; each is kept only when its map is not in
    the bounded closure of the maps kept so far.
    """
    kept = []
    closure = MapSet([MoebiusMap.identity()])
    for w in sorted(words, key=lambda w: (len(w), w.letters)):
        if w.is_empty or w.map.is_identity():
            continue
        if w.map in closure:
            continue
        kept.append(w)
        closure = closure_maps([k.map for k in kept], depth)
    return kept
