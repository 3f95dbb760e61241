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

from django.test import SimpleTestCase

from hdfolr.exceptions import ParseError, UnsupportedConstruct
from hdfolr.formats import loads
from hdfolr.grammar import parse_document, parse_sentence, parse_term
from hdfolr.kripke import KripkeStructure, sat_local, until_holds
from hdfolr.signatures import SignatureMorphism, Variable, extend
from hdfolr.syntax import (BOT, HDPL, HFOLR, HFOLS, RFOHL, TOP, Apply, At,
                           Dia, Eq, Modality, Nom, Rel, Seq, Star, Store,
                           Substitution, desugar_until, forall,
                           fragment_member, rigidify, subsentences,
                           translate)
from hdfolr.tests import conf


ROUND_TRIP = [
    '@n0 <l> n1',
    'not @n0 n1',
    'forall N . (at N delete)(empty) = empty',
    'forall L : List . (at n0 delete)(L) = L',
    'store x . <l ; l | l*> x',
    'exists L : List . delete(L) != cons(e, L)',
    '@n1 [l] (n2 or bot)',
    '(or n0)',
    'n0 <-> top',
    '@n0 (at n1 delete)(empty) = empty',
    'exists N, M : List . @N <l*> n2 and M = empty',
]

# two propositions for the linear frames of the until checks
LINEAR = """
nominal k;
modality l;
rel rho;
rel sigma;
"""


class ParserTests(SimpleTestCase):

    def setUp(self):
        self.sig = conf.create_list(axioms=False, model=False).signature

    def parse(self, text, sig=None):
        return parse_sentence(sig or self.sig, text)

    def test_parse(self):
        hpl = conf.create_hpl().signature
        self.assertEqual(self.parse('@k rho', hpl),
                         At('k', Rel(hpl.rel('rho'))))

        chain = conf.create_chain3().signature
        self.assertEqual(self.parse('<l*> k2', chain),
                         Dia(Star(Modality('l')), Nom('k2')))

        delete, empty = self.sig.op('delete'), self.sig.op('empty')
        self.assertEqual(
            self.parse('forall N . (at N delete)(empty) = empty'),
            forall([Variable('N')],
                   Eq(Apply(delete, (Apply(empty),), 'N'), Apply(empty))))

    def test_round_trip(self):
        for text in ROUND_TRIP:
            sentence = self.parse(text)
            self.assertEqual(self.parse(str(sentence)), sentence)
            self.assertEqual(str(self.parse(str(sentence))), str(sentence))

    def test_errors(self):
        self.assertRaises(ParseError, self.parse, '@n9 n0')
        self.assertRaises(ParseError, self.parse, 'delete(e) = empty')
        self.assertRaises(ParseError, self.parse, '@n0 (')
        self.assertRaises(ParseError, self.parse, 'exists n0 . n0')
        with self.assertRaises(ParseError) as cm:
            parse_document('nominal k;\nmodality ;\n')
        self.assertEqual(cm.exception.line, 2)


class TransformationTests(SimpleTestCase):

    def setUp(self):
        self.sig = conf.create_list(axioms=False, model=False).signature

    def parse(self, text, sig=None):
        return parse_sentence(sig or self.sig, text)

    def test_translate(self):
        chi = SignatureMorphism.renaming(self.sig, {'n0': 'm0',
                                                    'delete': 'remove'})
        sentence = self.parse('@n0 <l> n1 and delete(empty) = empty')
        self.assertEqual(translate(chi, sentence),
                         self.parse('@m0 <l> n1 and remove(empty) = empty',
                                    chi.target))
        self.assertEqual(translate(chi, BOT), BOT)

        identity = SignatureMorphism.identity(self.sig)
        back = SignatureMorphism.renaming(chi.target, {'m0': 'n0',
                                                       'remove': 'delete'})
        for text in ROUND_TRIP:
            sentence = self.parse(text)
            self.assertEqual(translate(identity, sentence), sentence)
            self.assertEqual(translate(back, translate(chi, sentence)),
                             sentence)
            self.assertEqual(translate(chi.compose(back), sentence),
                             sentence)

        sorts = SignatureMorphism.renaming(self.sig, {'List': 'Seq'})
        source = self.parse('exists L : List . L = L')
        self.assertEqual(translate(sorts, source),
                         self.parse('exists L : Seq . L = L', sorts.target))

    def test_substitute(self):
        x = Variable('x')
        theta = Substitution({x: 'n0'})
        sentence = self.parse('@x n1', extend(self.sig, [x]))
        self.assertEqual(theta(sentence), self.parse('@n0 n1'))

        L = Variable('L', 'List')
        value = parse_term(self.sig, 'cons(e, empty)')
        sentence = self.parse('(at n0 delete)(L) = L', extend(self.sig, [L]))
        self.assertEqual(
            Substitution({L: value})(sentence),
            self.parse('(at n0 delete)(cons(e, empty)) = cons(e, empty)'))

    def test_substitution_composition(self):
        L, M = Variable('L', 'List'), Variable('M', 'List')
        middle = extend(self.sig, [M])
        first = Substitution({L: parse_term(middle, 'cons(e, M)')})
        second = Substitution({M: parse_term(self.sig, 'empty')})
        sentence = self.parse('exists N . (at N delete)(L) = L',
                              extend(self.sig, [L]))
        self.assertEqual(second(first(sentence)),
                         first.compose(second)(sentence))
        self.assertEqual(
            second(first(sentence)),
            self.parse('exists N . (at N delete)(cons(e, empty)) = '
                       'cons(e, empty)'))

    def test_substitution_avoids_capture(self):
        result = Substitution({Variable('x'): 'y'})(
            Store('y', At('x', Nom('y'))))
        self.assertNotEqual(result.var, 'y')
        self.assertEqual(result.body, At('y', Nom(result.var)))

    def test_rigidify(self):
        L = Variable('L', 'List')
        ext = extend(self.sig, [L])
        self.assertEqual(rigidify(ext, 'n1', self.parse('delete(L) = L', ext)),
                         self.parse('(at n1 delete)(L) = L', ext))
        sentence = self.parse('cons(e, empty) = empty')
        self.assertEqual(rigidify(self.sig, 'n1', sentence), sentence)
        self.assertEqual(rigidify(self.sig, 'n1', Nom('n2')),
                         At('n1', Nom('n2')))
        self.assertEqual(rigidify(self.sig, 'n1',
                                  self.parse('@n2 delete(empty) = empty')),
                         self.parse('(at n2 delete)(empty) = empty'))

        hpl = conf.create_hpl().signature
        self.assertEqual(rigidify(hpl, 'k', self.parse('rho', hpl)),
                         self.parse('(at k rho)', hpl))

        self.assertRaises(UnsupportedConstruct, rigidify, self.sig, 'n0',
                          self.parse('<l> delete(empty) = empty'))
        self.assertRaises(UnsupportedConstruct, rigidify, self.sig, 'n0',
                          self.parse('store x . @x n0'))

    def test_fragments(self):
        chain = conf.create_chain3().signature
        composed = self.parse('<l ; l> k2', chain)
        self.assertFalse(fragment_member(HFOLR, composed, chain))
        self.assertTrue(fragment_member(HFOLR, self.parse('<l> k2', chain),
                                        chain))

        hpl = conf.create_hpl().signature
        self.assertTrue(fragment_member(HDPL, self.parse('@k rho', hpl), hpl))
        self.assertFalse(fragment_member(HDPL, self.parse('delete(empty) = '
                                                          'empty'), self.sig))

        self.assertFalse(fragment_member(
            HFOLS, self.parse('(at n0 delete)(empty) = empty'), self.sig))
        self.assertTrue(fragment_member(
            HFOLS, self.parse('delete(empty) = empty'), self.sig))

        self.assertFalse(fragment_member(RFOHL, self.parse('@n0 n1'),
                                         self.sig))

    def test_subsentences(self):
        chain = conf.create_chain3().signature
        closure = subsentences(self.parse('<l | l> k1', chain), 2)
        self.assertIn((self.parse('<l> k1', chain), frozenset()), closure)

        closure = set(s for s, _ in
                      subsentences(self.parse('<l*> k2', chain), 2))
        self.assertIn(Dia(Modality('l'), Nom('k2')), closure)
        self.assertIn(Dia(Seq(Modality('l'), Modality('l')), Nom('k2')),
                      closure)

        self.assertEqual(subsentences(Nom('k0'), 2),
                         {(Nom('k0'), frozenset())})

        closure = subsentences(self.parse('store x . <l> x', chain), 1)
        self.assertIn((Dia(Modality('l'), Nom('x')),
                       frozenset([Variable('x')])), closure)


class UntilTests(SimpleTestCase):

    def test_desugar_until(self):
        theory = conf.create_chain3(rho=True)
        m, sig = theory.model, theory.signature
        rho = parse_sentence(sig, 'rho')
        until = desugar_until(rho, TOP, 'l', sig.symbol_names())
        self.assertTrue(isinstance(until, Store))
        self.assertTrue(sat_local(m, 'w1', until))
        self.assertTrue(until_holds(m, 'w1', rho, TOP, 'l'))
        # l is not transitive, the desugared form sees direct successors
        self.assertFalse(sat_local(m, 'w0', until))
        self.assertTrue(until_holds(m, 'w0', rho, TOP, 'l'))
        self.assertFalse(sat_local(m, 'w2', until))
        self.assertFalse(until_holds(m, 'w2', rho, TOP, 'l'))

        never = desugar_until(BOT, rho, 'l', sig.symbol_names())
        for w in m.worlds:
            self.assertFalse(sat_local(m, w, never))

    def test_until_on_linear_frames(self):
        sig = loads(LINEAR).signature
        rho, sigma = sig.rel('rho'), sig.rel('sigma')
        pairs = [(parse_sentence(sig, a), parse_sentence(sig, b))
                 for a, b in [('rho', 'sigma'), ('sigma', 'rho'),
                              ('rho', 'top'), ('not rho', 'sigma'),
                              ('rho and sigma', 'not rho')]]
        until = [(phi, psi, desugar_until(phi, psi, 'l',
                                          sig.symbol_names()))
                 for phi, psi in pairs]
        checked = 0
        for n in range(1, 6):
            worlds = ['w%d' % i for i in range(n)]
            order = [(a, b) for i, a in enumerate(worlds)
                     for b in worlds[i + 1:]]
            for bits in range(4 ** n):
                rels = {}
                for i, w in enumerate(worlds):
                    rels[(rho, w)] = [()] if bits >> i & 1 else []
                    rels[(sigma, w)] = [()] if bits >> (n + i) & 1 else []
                m = KripkeStructure(sig, worlds, {'k': 'w0'}, {'l': order},
                                    {}, {}, rels)
                for phi, psi, sentence in until:
                    for w in worlds:
                        self.assertEqual(sat_local(m, w, sentence),
                                         until_holds(m, w, phi, psi, 'l'),
                                         (n, bits, str(sentence), w))
                checked += 1
        self.assertEqual(checked, sum(4 ** n for n in range(1, 6)))
