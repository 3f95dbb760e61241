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

import io
import json
import os
import shutil
import tempfile
from unittest import mock

from django.core.exceptions import ImproperlyConfigured
from django.core.management import call_command
from django.test import SimpleTestCase

from hdfolr.cli import (INPUT_ERROR, OK, REFUTED, UNKNOWN, RunConfig, main,
                        render, run)
from hdfolr.encoding import assemble_plus_model, build_plus
from hdfolr.formats import Theory, dumps, loads, model_text
from hdfolr.tests import conf


class CommandTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.tmp)

    def write(self, name, text):
        path = os.path.join(self.tmp, name)
        with open(path, 'w') as f:
            f.write(text)
        return path

    def run_command(self, command, *paths, **kwargs):
        return run(RunConfig(command, list(paths), **kwargs))

    def test_validate(self):
        path = self.write('list.hd', conf.LIST + conf.LIST_AXIOMS)
        status, report = self.run_command('validate', path)
        self.assertEqual(status, OK)
        self.assertEqual(report['problems'], [])
        self.assertEqual(report['budget']['max_worlds'], 3)

    def test_check(self):
        path = self.write('k2.hd', conf.HPL + conf.K2)
        status, report = self.run_command('check', path, sentences=['rho'])
        self.assertEqual(status, REFUTED)
        result, = report['results']
        self.assertEqual(result['worlds'], {'w0': True, 'w': False})
        self.assertFalse(result['global'])

        path = self.write('list.hd', conf.LIST + conf.LIST_AXIOMS +
                          conf.LIST_MODEL)
        status, report = self.run_command('check', path)
        self.assertEqual(status, OK)
        self.assertEqual(len(report['results']), 9)

    def test_translate(self):
        path = self.write('list.hd', conf.LIST + conf.LIST_AXIOMS)
        status, report = self.run_command('translate', path,
                                          rename=['delete=remove', 'n0 = m0'])
        self.assertEqual(status, OK)
        translated = loads(report['artifact'])
        self.assertIsNotNone(translated.signature.op('remove'))
        self.assertIn('m0', translated.signature.nominals)
        self.assertEqual(len(translated.axioms), 9)

    def test_rigidify(self):
        path = self.write('list.hd', conf.LIST + conf.LIST_AXIOMS)
        status, report = self.run_command('rigidify', path, at='n1', seed=3)
        self.assertEqual(status, OK)
        self.assertIn('@n0 <l> n1', report['axioms'])
        self.assertEqual(report['sweep'],
                         {'samples': 50, 'counterexamples': []})
        self.assertEqual(report['seed'], 3)
        status, report = self.run_command('rigidify', path)
        self.assertEqual(status, INPUT_ERROR)

    def test_encode_and_decode(self):
        source = self.write('enc.hd', conf.ENC)
        output = os.path.join(self.tmp, 'plus.hd')
        status, report = self.run_command('encode', source, output=output)
        self.assertEqual(status, OK)
        self.assertEqual(report['world_sort'], 'World')
        self.assertEqual(report['output'], output)
        self.assertTrue(os.path.exists(output))

        theory = conf.create_enc()
        bundle = build_plus(theory.signature)
        plus = assemble_plus_model(bundle, [theory.model])
        path = self.write('plus_model.hd',
                          dumps(Theory(bundle.target, [], plus)))
        status, report = self.run_command('decode', path, source=source,
                                          world='u0')
        self.assertEqual(status, OK)
        self.assertEqual(report['worlds'], ['w0', 'w1'])
        self.assertEqual(report['artifact'], model_text(theory.model))

        status, report = self.run_command('decode', path)
        self.assertEqual(status, INPUT_ERROR)

    def test_sat(self):
        path = self.write('sat.hd', conf.HPL + 'axiom @k rho;\n')
        status, report = self.run_command('sat', path)
        self.assertEqual(status, OK)
        self.assertIsNotNone(loads(report['artifact']).model)

        path = self.write('unsat.hd',
                          conf.HPL + 'axiom rho;\naxiom not rho;\n')
        status, report = self.run_command('sat', path)
        self.assertEqual(status, UNKNOWN)
        self.assertEqual(report['model'], 'none')

    def test_force(self):
        path = self.write('forcing.hd', conf.FORCING % '')
        status, report = self.run_command('force', path)
        self.assertEqual(status, REFUTED)
        self.assertEqual(len(report['violations']), 1)

        path = self.write('closed.hd', conf.FORCING % '@k rho; ')
        status, report = self.run_command('force', path, sentences=['j'],
                                          at='k', condition='p1')
        self.assertEqual(status, OK)
        self.assertEqual(report['forces'], {'j': True})

    def test_generic(self):
        path = self.write('closed.hd', conf.FORCING % '@k rho; ')
        status, report = self.run_command('generic', path)
        self.assertEqual(status, OK)
        self.assertEqual(report['generic'], ['0', 'p1'])
        self.assertTrue(all(d['positive'] for d in report['decisions']))

        path = self.write('forcing.hd', conf.FORCING % '')
        status, report = self.run_command('generic', path)
        self.assertEqual(status, REFUTED)

    def test_omit(self):
        path = self.write('omit.hd', conf.HPL + 'axiom @k <l> k;\n')
        status, report = self.run_command(
            'omit', path, nominal_type=True,
            budget={'max_worlds': 2, 'max_constants': 1})
        self.assertEqual(status, OK)
        self.assertTrue(report['audit']['ok'])
        self.assertEqual(report['audit']['omitted'], {'nominal': True})

    def test_entail(self):
        path = self.write('entail.hd', conf.HPL + 'axiom @k rho;\n')
        status, report = self.run_command('entail', path,
                                          sentences=['@k rho'])
        self.assertEqual(status, OK)
        self.assertEqual(report['results'][0]['verdict'], 'derivable')
        self.assertEqual(report['results'][0]['derivation']['rule'], 'R0')

        status, report = self.run_command('entail', path,
                                          sentences=['@k <l> k'])
        self.assertEqual(status, UNKNOWN)
        self.assertIsNone(report['results'][0]['derivation'])

    def test_input_errors(self):
        status, report = self.run_command(
            'sat', os.path.join(self.tmp, 'missing.hd'))
        self.assertEqual(status, INPUT_ERROR)
        self.assertIn('error', report)

        path = self.write('sat.hd', conf.HPL)
        status, report = self.run_command('sat', path,
                                          budget={'max_worlds': 0})
        self.assertEqual(status, INPUT_ERROR)

        status, report = self.run_command('check', path,
                                          sentences=['rho and'])
        self.assertEqual(status, INPUT_ERROR)

        self.assertRaises(ImproperlyConfigured, RunConfig, 'bogus')
        self.assertRaises(ImproperlyConfigured, RunConfig, 'sat',
                          budget={'depth': 1})

    def test_render(self):
        path = self.write('sat.hd', conf.HPL + 'axiom @k rho;\n')
        status, report = self.run_command('sat', path, seed=5)
        rendered = json.loads(render(report))
        self.assertEqual(rendered['status'], OK)
        self.assertEqual(rendered['seed'], 5)
        self.assertEqual(rendered['command'], 'sat')


class EntryPointTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.tmp)
        self.path = os.path.join(self.tmp, 'k2.hd')
        with open(self.path, 'w') as f:
            f.write(conf.HPL + conf.K2)

    def test_main(self):
        out = io.StringIO()
        with mock.patch('sys.stdout', out):
            status = main(['check', self.path, '-s', 'rho',
                           '--max-worlds', '2'])
        self.assertEqual(status, REFUTED)
        report = json.loads(out.getvalue())
        self.assertEqual(report['budget']['max_worlds'], 2)

    def test_management_command(self):
        out = io.StringIO()
        call_command('hdfolr', 'check', self.path, sentence=['@k <l> k'],
                     stdout=out)
        self.assertEqual(json.loads(out.getvalue())['status'], OK)

        with self.assertRaises(SystemExit) as cm:
            call_command('hdfolr', 'check', self.path, sentence=['rho'],
                         stdout=io.StringIO())
        self.assertEqual(cm.exception.code, REFUTED)
