__version__ = '0.1.0'
__copyright__ = '2026, wlalign developers'
__author__ = 'wlalign developers'

from . import config, embedding, evaluation, graph_core, main, relabel, wlalign_enum, wlalign_io
# -*- coding: utf-8 -*-
from .main import WlAlign
