"""Exact hypergraph width parameters, bramble certificates and marshal games."""
