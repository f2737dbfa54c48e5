"""codeatlas: semantic multi-repository code knowledge graphs with a
tool-calling exploration agent."""

__version__ = "0.1.0"
