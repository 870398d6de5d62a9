"""blindlab: exact laboratory for subuniversal sampling models and the audit
of classically blind delegation schemes.

Everything downstream of a circuit is computed in exact arithmetic; floating
point appears only inside independent cross-check oracles.
"""

__version__ = "0.1.0"
