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

import hashlib
import logging

from django.conf import settings
from django.core.cache import InvalidCacheBackendError, caches

from hdfolr.grammar import signature_text
from hdfolr.utils import get_custom_setting

logger = logging.getLogger('hdfolr')

NO_MODEL = 'no-model'


class DjangoCacheAdapter(dict):
    """A dict that is stored under one key of a Django cache"""

    key_prefix = '_hdfolr'

    def __init__(self, django_cache, key_suffix, timeout=None):
        self.cache = django_cache
        self.key = self.key_prefix + key_suffix
        self.timeout = timeout

        super(DjangoCacheAdapter, self).__init__(self._get_objects())

    def _get_objects(self):
        return self.cache.get(self.key, {})

    def _set_objects(self, objects):
        self.cache.set(self.key, objects, self.timeout)

    def sync(self):
        objs = {}
        objs.update(self)
        self._set_objects(objs)


def theory_key(sig, sentences):
    text = signature_text(sig) + '\n'.join(sorted(str(s) for s in sentences))
    return hashlib.sha1(text.encode('utf-8')).hexdigest()


def budget_key(budget):
    return '%(max_worlds)d:%(max_carrier)d:%(max_constants)d:' \
        '%(star_bound)d:%(term_depth)d' % budget.as_dict()


class SatCache(object):
    """Memoises bounded satisfiability answers per theory and budget.

    A stored answer is either a model or ``NO_MODEL``.
    """

    def __init__(self, django_cache, timeout=None):
        self.cache = django_cache
        self.timeout = timeout

    def _db(self, sig, sentences):
        return DjangoCacheAdapter(self.cache, '_sat_' +
                                  theory_key(sig, sentences), self.timeout)

    def get(self, sig, sentences, budget):
        """Returns ``(hit, model)``; ``model`` is None when there is none."""
        db = self._db(sig, sentences)
        answer = db.get(budget_key(budget))
        if answer is None:
            logger.debug('Sat cache miss for %s', db.key)
            return False, None
        logger.debug('Sat cache hit for %s', db.key)
        return True, (None if answer == NO_MODEL else answer)

    def set(self, sig, sentences, budget, model):
        db = self._db(sig, sentences)
        db[budget_key(budget)] = NO_MODEL if model is None else model
        db.sync()

    def delete(self, sig, sentences):
        db = self._db(sig, sentences)
        if db:
            db.clear()
            db.sync()


def get_sat_cache():
    """The configured SatCache, or None when caching is disabled."""
    if not settings.configured:
        return None
    alias = get_custom_setting('HDFOLR_CACHE_ALIAS', 'default')
    if alias is None:
        return None
    try:
        django_cache = caches[alias]
    except InvalidCacheBackendError:
        logger.warning('Cache alias %s is not configured, caching disabled',
                       alias)
        return None
    return SatCache(django_cache,
                    get_custom_setting('HDFOLR_CACHE_TIMEOUT', 3600))
