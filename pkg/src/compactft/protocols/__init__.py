# coding: utf-8
# Copyright (c) 2026 The pycompactft developers
#
# This file is part of pycompactft.
# pycompactft is free software: you can redistribute it or modify
# it under the terms of the GNU General Public License as published
# by the Free Software Foundation, version 2.
# See http://www.gnu.org/licenses/gpl-2.0.html.
"""Compact distributed protocols

Handlers for the preprocessing stages, each run to completion on a
:class:`~compactft.kernel.Network` and returning its
:class:`~compactft.kernel.StageStats`.
"""

from .vars import *
from .leader import *
from .tree import *
from .heavy import *
from .rename import *
from .lightpath import *
from .will import *
from .pipeline import *
