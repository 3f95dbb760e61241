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

import dataclasses
from importlib import import_module

from django.core.exceptions import ImproperlyConfigured

from hdfolr.utils import get_custom_setting


@dataclasses.dataclass(frozen=True)
class SatBudget(object):
    """Bounds for every search that would otherwise be unbounded.

    ``max_worlds`` and ``max_carrier`` bound the Kripke structures that the
    model finder enumerates, ``max_constants`` the fresh constants per sort
    that the forcing and omitting engines may introduce, ``star_bound`` the
    unfoldings of ``a*`` and ``term_depth`` the ground terms that are
    materialised.
    """

    max_worlds: int = 3
    max_carrier: int = 2
    max_constants: int = 2
    star_bound: int = 3
    term_depth: int = 2

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not isinstance(value, int) or value < 1:
                raise ImproperlyConfigured(
                    'Budget field %s must be a positive integer, got %r'
                    % (field.name, value))

    def replace(self, **overrides):
        overrides = dict((k, v) for k, v in overrides.items() if v is not None)
        return dataclasses.replace(self, **overrides)

    def as_dict(self):
        return dataclasses.asdict(self)


def get_budget_loader(path):
    i = path.rfind('.')
    module, attr = path[:i], path[i + 1:]
    try:
        mod = import_module(module)
    except ImportError as e:
        raise ImproperlyConfigured(
            'Error importing budget loader %s: "%s"' % (path, e))
    except ValueError:
        raise ImproperlyConfigured(
            'Error importing budget loader. Is HDFOLR_BUDGET_LOADER '
            'a correct string with a callable path?'
            )
    try:
        budget_loader = getattr(mod, attr)
    except AttributeError:
        raise ImproperlyConfigured(
            'Module "%s" does not define a "%s" budget loader' %
            (module, attr)
            )

    if not hasattr(budget_loader, '__call__'):
        raise ImproperlyConfigured(
            "Budget loader must be a callable object.")

    return budget_loader


def budget_settings_loader():
    """Builds the budget from the HDFOLR_* settings.

    This is also the default budget loader.
    """
    return SatBudget(
        max_worlds=get_custom_setting('HDFOLR_MAX_WORLDS', 3),
        max_carrier=get_custom_setting('HDFOLR_MAX_CARRIER', 2),
        max_constants=get_custom_setting('HDFOLR_MAX_CONSTANTS', 2),
        star_bound=get_custom_setting('HDFOLR_STAR_BOUND', 3),
        term_depth=get_custom_setting('HDFOLR_TERM_DEPTH', 2),
        )


def get_budget(loader_path=None, **overrides):
    loader_path = loader_path or get_custom_setting(
        'HDFOLR_BUDGET_LOADER', 'hdfolr.conf.budget_settings_loader')

    budget_loader = get_budget_loader(loader_path)
    budget = budget_loader()
    if not isinstance(budget, SatBudget):
        raise ImproperlyConfigured(
            'Budget loader %s returned %r instead of a SatBudget'
            % (loader_path, budget))
    return budget.replace(**overrides)
