"""
fwcheck
Exact Foldy-Wouthuysen operators: symbolic series and numeric verification
"""
