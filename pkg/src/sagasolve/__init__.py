"""Solve Scott Adams format adventure games by SAT-based bounded model checking.

Pipeline: ``dbformat`` parses a .dat file, ``specialize`` lowers its action
table, ``engine`` runs it, ``bmc`` unrolls it into CNF for the solver in
``sat``, and ``cli`` ties the steps together.
"""

__version__ = "0.1.0"
