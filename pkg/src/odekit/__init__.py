"""Exact toolkit for linear differential operators with coefficients rational at infinity."""
