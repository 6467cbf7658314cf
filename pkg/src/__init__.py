"""
defectq - fault-tolerance workbench for defective surface-code lattices and encoded Bell-pair purification.
"""

__version__ = "0.2.0"
