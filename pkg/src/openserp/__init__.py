"""Reproduce, audit and defend against open search endpoints.

The package has three services built on shared plumbing:

* a mock search engine with pluggable protection policies,
* a rebranding reverse proxy ("own a search engine"),
* an auditor classifying endpoints as Open or Protected.
"""

__version__ = "0.1.0"
