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

from hdfolr.exceptions import SignatureError
from hdfolr.signatures import (ANY, FOSignature, HDSignature, OpDecl,
                               RelDecl, SignatureMorphism, Variable, extend,
                               forget, fresh_variables, is_non_void,
                               partition, rigidify_signature, validate)
from hdfolr.tests import conf


class SignatureTests(SimpleTestCase):

    def setUp(self):
        self.hpl = conf.create_hpl().signature
        self.list = conf.create_list(axioms=False, model=False).signature

    def test_validate(self):
        self.assertTrue(validate(self.hpl).ok)
        self.assertTrue(validate(self.list).ok)

        ternary = HDSignature(
            FOSignature({ANY}, (), [RelDecl('m', (ANY, ANY, ANY))]),
            FOSignature(), FOSignature())
        self.assertIn('modality arity: m has arity 3', validate(ternary))

        orphan = HDSignature(FOSignature({ANY}), FOSignature({'S'}),
                             FOSignature({'S'}, [OpDecl('c', (), 'S')]))
        self.assertIn('not a subsignature: rigid op c absent from body',
                      validate(orphan))

    def test_extend(self):
        variables = {Variable('N'), Variable('L', 'List')}
        ext = extend(self.list, variables)
        self.assertIn('N', ext.nominals)
        self.assertIn(OpDecl('L', (), 'List'), ext.rigid.ops)
        self.assertNotIn('N', self.list.nominals)
        self.assertEqual(forget(ext, variables), self.list)

        z = extend(self.hpl, [Variable('z')])
        self.assertEqual(z.nominals, frozenset(['k', 'z']))

    def test_extend_rejects(self):
        self.assertRaises(SignatureError, extend, self.list,
                          [Variable('n0')])
        flexible = HDSignature.build(nominals=['k'], sorts=['S'])
        self.assertRaises(SignatureError, extend, flexible,
                          [Variable('x', 'S')])

    def test_fresh_variables(self):
        names = [v.name for v in fresh_variables(self.list, 'List', 2)]
        self.assertEqual(names, ['list0', 'list1'])
        names = [v.name for v in fresh_variables(self.hpl, ANY, 2,
                                                 taken={'c0'})]
        self.assertNotIn('c0', names)
        self.assertEqual(len(set(names)), 2)

    def test_rigidify_signature(self):
        rigidified = rigidify_signature(self.list)
        self.assertEqual(rigidified.at_sig.sorts,
                         frozenset(['Elt', 'List']))
        for k in ('n0', 'n1', 'n2'):
            self.assertIn(OpDecl((k, 'delete'), ('List',), 'List'),
                          rigidified.at_sig.ops)
        self.assertEqual(len(rigidified.bar_sig.ops), 7)

        flexible = HDSignature.build(nominals=['a', 'b'], sorts=['S'])
        rigidified = rigidify_signature(flexible)
        self.assertEqual(rigidified.at_sig.sorts,
                         frozenset([('a', 'S'), ('b', 'S')]))

    def test_is_non_void(self):
        self.assertTrue(is_non_void(self.list))
        self.assertTrue(is_non_void(self.hpl))
        self.assertFalse(is_non_void(HDSignature.build(nominals=['k'],
                                                       sorts=['Elt'])))
        wrapped = HDSignature.build(
            nominals=['k'], sorts=['Elt', 'List'],
            ops=[OpDecl('wrap', ('Elt',), 'List')])
        self.assertFalse(is_non_void(wrapped))
        self.assertFalse(is_non_void(HDSignature.build()))

    def test_partition(self):
        empty, cons = self.list.op('empty'), self.list.op('cons')
        parts = partition(self.list, [empty, cons])
        self.assertEqual(parts.constrained, frozenset(['List']))
        self.assertEqual(parts.loose, frozenset(['Elt']))
        self.assertEqual([v.name for v in parts.loose_vars('Elt', 2)],
                         ['Elt0', 'Elt1'])
        self.assertRaises(SignatureError, parts.loose_vars, 'List', 1)

        parts = partition(self.list, [])
        self.assertEqual(parts.loose, frozenset(['Elt', 'List']))

        self.assertRaises(SignatureError, partition, self.list,
                          [self.list.op('delete')])

    def test_morphisms(self):
        chi = SignatureMorphism.renaming(self.list,
                                         {'n0': 'm0', 'delete': 'remove',
                                          'List': 'Seq'})
        self.assertTrue(chi.validate().ok)
        self.assertIn('m0', chi.target.nominals)
        self.assertEqual(chi.op(self.list.op('delete')),
                         OpDecl('remove', ('Seq',), 'Seq'))
        self.assertIn('Seq', chi.target.rigid_sorts)

        back = SignatureMorphism.renaming(chi.target,
                                          {'m0': 'n0', 'remove': 'delete',
                                           'Seq': 'List'})
        round_trip = chi.compose(back)
        self.assertEqual(round_trip.target, self.list)
        identity = SignatureMorphism.identity(self.list)
        self.assertEqual(round_trip.op_map, identity.op_map)
        self.assertEqual(round_trip.nominal_map, identity.nominal_map)
        self.assertEqual(identity.compose(chi).op_map, chi.op_map)

    def test_morphism_rigidity(self):
        target = HDSignature.build(nominals=['n0', 'n1', 'n2'],
                                   modalities=['l'], sorts=['Elt', 'List'],
                                   ops=[OpDecl('e', (), 'Elt')])
        chi = SignatureMorphism(
            self.list, target,
            {'Elt': 'Elt', 'List': 'List'},
            {self.list.op('e'): OpDecl('e', (), 'Elt')}, {},
            dict((k, k) for k in self.list.nominals), {'l': 'l'})
        report = chi.validate()
        self.assertFalse(report.ok)
        self.assertIn('op e: rigid symbol mapped to a flexible one', report)
        self.assertIn('sort List: rigid sort mapped to a flexible one',
                      report)
