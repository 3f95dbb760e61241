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

import random

from django.test import SimpleTestCase

from hdfolr.encoding import (assemble_plus_model, build_plus, bullet_theory,
                             decode, encode, encode_at, encode_term)
from hdfolr.exceptions import LoadError, UnsupportedConstruct
from hdfolr.formats import loads
from hdfolr.grammar import parse_sentence, parse_term
from hdfolr.kripke import sat_global, sat_local
from hdfolr.signatures import HDSignature, Variable, extend
from hdfolr.syntax import Apply
from hdfolr.tests import conf


SENTENCES = [
    '@k <l> j',
    'forall X : D . f(X) = X',
    'exists X : D . p(X) and r(X)',
    'store y . @k <l> y',
    '@j not k',
    'not r(f(f(X0)))',
    'exists x . @x (exists X : D . f(X) != X)',
]

MORE = [
    'store y . @j <l> y',
    'forall X : D . (at k f)(X) = (at j f)(X)',
    '@k (exists X : D . r(X) and not p(X))',
]


class EncodingTests(SimpleTestCase):

    def setUp(self):
        self.theory = conf.create_enc()
        self.sig = self.theory.signature
        self.bundle = build_plus(self.sig)

    def parse(self, text):
        if 'X0' in text:
            text = 'forall X0 : D . %s' % text
        return parse_sentence(self.sig, text)

    def test_build_plus(self):
        bundle = self.bundle
        self.assertFalse(bundle.target.nominals)
        self.assertEqual(bundle.world_sort, 'World')
        self.assertEqual(bundle.sort, 'D')
        self.assertEqual(bundle.target.rigid_sorts,
                         frozenset(['World', 'D']))
        self.assertEqual(bundle.nominals['k'].result, 'World')
        self.assertEqual(bundle.ops[self.sig.op('f')].arity, ('World', 'D'))
        self.assertEqual(len(bundle.axioms), 1)
        self.assertIn(bundle.z, bundle.target_z.nominals)

    def test_build_plus_rejects(self):
        self.assertRaises(UnsupportedConstruct, build_plus,
                          conf.create_hpl().signature)
        self.assertRaises(UnsupportedConstruct, build_plus,
                          HDSignature.build(nominals=['k'], sorts=['S']))
        rigid_op = loads('nominal k;\nrigid sort D;\nrigid op c : -> D;\n')
        self.assertRaises(UnsupportedConstruct, build_plus,
                          rigid_op.signature)

    def test_satisfaction_is_preserved(self):
        m = self.theory.model
        plus = assemble_plus_model(self.bundle, [m])
        self.assertEqual(plus.worlds, ('u0',))
        plus_z = plus.expand({Variable(self.bundle.z): 'u0'})
        self.assertEqual(plus_z.signature, self.bundle.target_z)
        for text in SENTENCES:
            sentence = self.parse(text)
            self.assertEqual(sat_global(m, sentence),
                             sat_global(plus_z, encode(self.bundle,
                                                       sentence)))
            for k in ('k', 'j'):
                self.assertEqual(
                    sat_local(m, m.nominal(k), sentence),
                    sat_global(plus_z, encode_at(self.bundle, k, sentence)))

    def test_random_structures(self):
        rng = random.Random(29)
        sentences = [self.parse(text) for text in SENTENCES + MORE]
        encoded = [(s, encode(self.bundle, s),
                    dict((k, encode_at(self.bundle, k, s)) for k in 'kj'))
                   for s in sentences]
        z = Variable(self.bundle.z)
        for _ in range(1000):
            models = conf.random_enc_models(rng, self.sig, rng.randint(1, 3))
            plus = assemble_plus_model(self.bundle, models)
            for u, m in zip(plus.worlds, models):
                plus_z = plus.expand({z: u})
                for sentence, everywhere, at in encoded:
                    self.assertEqual(sat_global(m, sentence),
                                     sat_global(plus_z, everywhere),
                                     str(sentence))
                    for k in 'kj':
                        self.assertEqual(
                            sat_local(m, m.nominal(k), sentence),
                            sat_global(plus_z, at[k]), (k, str(sentence)))
                self.assertEqual(decode(self.bundle, plus, u), m)

    def test_unsupported(self):
        self.assertRaises(UnsupportedConstruct, encode, self.bundle,
                          self.parse('<l ; l> k'))
        self.assertRaises(UnsupportedConstruct, encode, self.bundle,
                          self.parse('<l> p(X0)'))

    def test_decode(self):
        m = self.theory.model
        swapped = m.replace(nominals={'k': 'w1', 'j': 'w0'})
        plus = assemble_plus_model(self.bundle, [m, swapped])
        self.assertEqual(plus.worlds, ('u0', 'u1'))
        self.assertEqual(decode(self.bundle, plus, 'u0'), m)
        self.assertEqual(decode(self.bundle, plus, 'u1'), swapped)
        self.assertRaises(LoadError, decode, self.bundle, plus, 'u2')

    def test_assemble_rejects(self):
        m = self.theory.model
        self.assertRaises(LoadError, assemble_plus_model, self.bundle, [])
        self.assertRaises(LoadError, assemble_plus_model, self.bundle,
                          [m, m.replace(worlds=('w0',))])

    def test_bullet_theory(self):
        sentences = [self.parse('@k <l> j'), self.parse('@j not k')]
        sig, theory = bullet_theory(self.bundle, sentences)
        self.assertTrue({'k0', 'k1'} <= set(sig.nominals))
        self.assertIn('lt', sig.modalities)
        self.assertEqual(len(theory), len(self.bundle.axioms) + 2)

    def test_encode_term(self):
        ext = extend(self.sig, [Variable('X', 'D')])
        term = parse_term(ext, 'f(X)')
        self.assertRaises(UnsupportedConstruct, encode_term, self.bundle,
                          term)
        encoded = encode_term(self.bundle, term, 'k')
        self.assertEqual(encoded.op, self.bundle.ops[self.sig.op('f')])
        self.assertEqual(encoded.at, self.bundle.z)
        self.assertEqual(encoded.args, (
            Apply(self.bundle.nominals['k'], (), self.bundle.z),
            term.args[0]))

        pinned = encode_term(self.bundle, parse_term(ext, '(at j f)(X)'), 'k')
        self.assertEqual(pinned.args[0],
                         Apply(self.bundle.nominals['j'], (), self.bundle.z))
