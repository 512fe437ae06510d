"""sheafnet: finite sites, sheaves, stacks and semantic information measures
for layered network architectures."""

__version__ = "0.1.0"
