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


class HDFOLRError(Exception):
    """Base class for every error raised by hdfolr."""


class SignatureError(HDFOLRError):
    pass


class ParseError(HDFOLRError):

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = 'line %d, column %d: %s' % (line, column or 0, message)
        super(ParseError, self).__init__(message)


class LoadError(ParseError):
    """A file parsed but its content breaks a structural rule."""


class UnsupportedConstruct(HDFOLRError):
    pass


class VoidSignature(HDFOLRError):
    pass


class InconsistentTheory(HDFOLRError):
    pass


class BudgetExceeded(HDFOLRError):

    def __init__(self, message, budget=None):
        self.budget = budget
        super(BudgetExceeded, self).__init__(message)


class InconsistentGenericModel(HDFOLRError):

    def __init__(self, message, mismatches=()):
        self.mismatches = tuple(mismatches)
        super(InconsistentGenericModel, self).__init__(message)


class EmptyForcingProperty(HDFOLRError):

    def __init__(self, message, budget=None):
        self.budget = budget
        super(EmptyForcingProperty, self).__init__(message)


class OmissionFailure(HDFOLRError):

    def __init__(self, message, step=None, budget=None, audit=None):
        self.step = step
        self.budget = budget
        self.audit = audit
        super(OmissionFailure, self).__init__(message)
