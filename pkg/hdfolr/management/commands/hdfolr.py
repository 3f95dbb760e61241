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

import sys

from django.core.exceptions import ImproperlyConfigured
from django.core.management.base import BaseCommand, CommandError

from hdfolr.cli import RunConfig, add_arguments, render, run


class Command(BaseCommand):
    help = ('Runs an hdfolr command on theory, model and forcing files and '
            'prints the JSON report.')

    def add_arguments(self, parser):
        add_arguments(parser)

    def handle(self, *args, **options):
        try:
            config = RunConfig.from_options(options)
        except ImproperlyConfigured as e:
            raise CommandError(str(e))
        status, report = run(config)
        self.stdout.write(render(report))
        if status:
            sys.exit(status)
