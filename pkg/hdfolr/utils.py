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

import itertools

from django.conf import settings


def get_custom_setting(name, default=None):
    if not settings.configured:
        return default
    return getattr(settings, name, default)


def fresh_name(base, taken):
    """Returns ``base`` or ``base<n>`` for the first n not in ``taken``."""
    if base not in taken:
        return base
    for i in itertools.count(1):
        candidate = '%s%d' % (base, i)
        if candidate not in taken:
            return candidate

