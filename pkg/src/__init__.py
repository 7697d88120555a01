"""
padic-stark - p-adic twisted zeta values of real quadratic fields.
"""
