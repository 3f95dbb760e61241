# Copyright (C) 2024 The hdfolr developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#            http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from hdfolr.formats import loads
from hdfolr.kripke import KripkeStructure
from hdfolr.signatures import SignatureMorphism


HPL = """
nominal k;
modality l;
rel rho;
"""

K1 = """
model {
  worlds w0;
  denote k = w0;
  edge l : w0 -> w0;
  rel rho @ w0 : ();
}
"""

# K1 plus an unnamed world where rho is false
K2 = """
model {
  worlds w0, w;
  denote k = w0;
  edge l : w0 -> w0;
  rel rho @ w0 : ();
}
"""

CHAIN3 = """
nominal k0, k1, k2;
modality l;
rel rho;
model {
  worlds w0, w1, w2;
  denote k0 = w0;
  denote k1 = w1;
  denote k2 = w2;
  edge l : w0 -> w1;
  edge l : w1 -> w2;
%s}
"""

LIST = """
nominal n0, n1, n2;
modality l;
rigid sort Elt, List;
rigid op e : -> Elt;
rigid op empty : -> List;
rigid op cons : Elt List -> List;
op delete : List -> List;
"""

LIST_AXIOMS = """
axiom @n0 <l> n1;
axiom @n1 <l> n2;
axiom not @n0 n1;
axiom not @n0 n2;
axiom not @n1 n2;
axiom forall N . (at N delete)(empty) = empty;
axiom forall L : List . (at n0 delete)(L) = L;
axiom (at n1 delete)(cons(e, empty)) = (at n0 delete)(empty);
axiom (at n2 delete)(cons(e, cons(e, empty))) = (at n1 delete)(cons(e, empty));
"""

# lists of length <= 2 over {e}; delete at n_i drops i elements
LIST_MODEL = """
model {
  worlds w0, w1, w2;
  denote n0 = w0;
  denote n1 = w1;
  denote n2 = w2;
  edge l : w0 -> w1;
  edge l : w1 -> w2;
  carrier Elt = {e};
  carrier List = {nil, one, two};
  op e : () -> e;
  op empty : () -> nil;
  op cons : (e, nil) -> one;
  op cons : (e, one) -> two;
  op cons : (e, two) -> two;
  op delete @ w0 : (nil) -> nil;
  op delete @ w0 : (one) -> one;
  op delete @ w0 : (two) -> two;
  op delete @ w1 : (nil) -> nil;
  op delete @ w1 : (one) -> nil;
  op delete @ w1 : (two) -> one;
  op delete @ w2 : (nil) -> nil;
  op delete @ w2 : (one) -> nil;
  op delete @ w2 : (two) -> nil;
  truncated;
}
"""

ENC = """
nominal k, j;
modality l;
rigid sort D;
op f : D -> D;
rigid rel r : D;
rel p : D;
"""

ENC_MODEL = """
model {
  worlds w0, w1;
  denote k = w0;
  denote j = w1;
  edge l : w0 -> w1;
  carrier D = {d0, d1};
  op f @ w0 : (d0) -> d0;
  op f @ w0 : (d1) -> d1;
  op f @ w1 : (d0) -> d1;
  op f @ w1 : (d1) -> d0;
  rel r : (d0);
  rel p @ w0 : (d0);
  rel p @ w1 : (d1);
}
"""

FORCING = """
nominal k, j;
modality l;
rel rho;
condition 0 { }
condition p1 { @k j; @j rho; %s}
condition p2 { @k rho; }
order 0 < p1;
order 0 < p2;
"""


def create_hpl(model=None):
    return loads(HPL + (model or ''))


def create_chain3(rho=False):
    return loads(CHAIN3 % ('  rel rho @ w2 : ();\n' if rho else ''))


def create_list(axioms=True, model=True):
    text = LIST
    if axioms:
        text += LIST_AXIOMS
    if model:
        text += LIST_MODEL
    return loads(text)


def create_enc(model=True):
    return loads(ENC + (ENC_MODEL if model else ''))


def create_forcing(closed=False):
    """Three conditions; unless ``closed``, p1 entails @k rho without
    any condition above it adding it.
    """
    return loads(FORCING % ('@k rho; ' if closed else ''))


def random_model(rng, sig, max_worlds=3, rels=('rho',)):
    """A random structure over a signature without sorts."""
    count = rng.randint(1, max_worlds)
    worlds = ['w%d' % i for i in range(count)]
    nominals = dict((k, rng.choice(worlds)) for k in sorted(sig.nominals))
    modalities = dict(
        (m, [(a, b) for a in worlds for b in worlds if rng.random() < 0.4])
        for m in sorted(sig.modalities))
    table = {}
    for name in rels:
        decl = sig.rel(name)
        for w in worlds:
            table[(decl, w)] = [()] if rng.random() < 0.5 else []
    return KripkeStructure(sig, worlds, nominals, modalities, {}, {}, table)


MORPH_SOURCE = """
nominal k, j;
modality l, t;
rel rho;
rel sigma;
"""

MORPH_TARGET = """
nominal a, b, c;
modality p, q;
rel r;
rel s;
"""


def random_action(rng, sig, depth=2):
    modalities = sorted(sig.modalities)
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(modalities)
    kind = rng.randrange(3)
    if kind == 2:
        return '(%s)*' % random_action(rng, sig, depth - 1)
    return '(%s %s %s)' % (random_action(rng, sig, depth - 1),
                           ';' if kind == 0 else '|',
                           random_action(rng, sig, depth - 1))


def random_sentence(rng, sig, depth=5, bound=()):
    """Text of a random sentence over a signature without sorts."""
    nominals = sorted(sig.nominals) + list(bound)
    if depth == 0 or rng.random() < 0.25:
        rels = sorted(rel.name for rel in sig.body.rels)
        return rng.choice(nominals + rels)
    kind = rng.randrange(8)
    if kind >= 6:
        var = 'x%d' % len(bound)
        body = random_sentence(rng, sig, depth - 1, tuple(bound) + (var,))
        return '%s %s . %s' % ('store' if kind == 6 else 'exists', var,
                               body)
    first = random_sentence(rng, sig, depth - 1, bound)
    if kind == 0:
        return 'not (%s)' % first
    if kind == 1:
        return '@%s (%s)' % (rng.choice(nominals), first)
    if kind == 2:
        return '<%s> (%s)' % (random_action(rng, sig), first)
    if kind == 3:
        return '[%s] (%s)' % (random_action(rng, sig), first)
    second = random_sentence(rng, sig, depth - 1, bound)
    return '(%s) %s (%s)' % (first, 'or' if kind == 4 else 'and', second)


def random_morphism(rng, source, target):
    """A random, possibly non-injective, morphism between signatures
    without sorts.
    """
    nominals = sorted(target.nominals)
    modalities = sorted(target.modalities)
    rels = sorted(target.body.rels)
    return SignatureMorphism(
        source, target, {}, {},
        dict((rel, rng.choice(rels)) for rel in source.body.rels),
        dict((k, rng.choice(nominals)) for k in source.nominals),
        dict((m, rng.choice(modalities)) for m in source.modalities))


def random_enc_models(rng, sig, count=1, max_worlds=3, max_carrier=2):
    """``count`` random structures over the ENC signature sharing their
    worlds and carrier.
    """
    worlds = ['w%d' % i for i in range(rng.randint(1, max_worlds))]
    carrier = ['d%d' % i for i in range(rng.randint(1, max_carrier))]
    f, r, p = sig.op('f'), sig.rel('r'), sig.rel('p')
    models = []
    for _ in range(count):
        nominals = dict((k, rng.choice(worlds)) for k in sorted(sig.nominals))
        edges = [(a, b) for a in worlds for b in worlds if rng.random() < 0.4]
        ops = dict(((f, w), dict(((d,), rng.choice(carrier))
                                 for d in carrier))
                   for w in worlds)
        rels = {(r, None): [(d,) for d in carrier if rng.random() < 0.5]}
        for w in worlds:
            rels[(p, w)] = [(d,) for d in carrier if rng.random() < 0.5]
        models.append(KripkeStructure(sig, worlds, nominals, {'l': edges},
                                      {('D', None): carrier}, ops, rels))
    return models
