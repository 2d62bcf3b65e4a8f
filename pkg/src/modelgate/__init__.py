"""modelgate: a self-contained AI inference gateway platform.

REST endpoints over pluggable deterministic backends, API-key
authentication, durable call logging, internal round-robin load balancing,
an evaluation harness, and a stress-testing / throughput-benchmark CLI.
"""

__version__ = "0.1.0"
