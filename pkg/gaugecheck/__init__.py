"""Poisson and quantum gauge-transformation checks for matrix groups."""

import logging

LOGGER = logging.getLogger(__package__)
VERBOSE = int(logging.DEBUG / 2)
