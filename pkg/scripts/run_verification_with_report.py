#!/usr/bin/env python3
"""
Verification wrapper that runs every symbolic and numeric suite and writes a
combined report to reports/
"""

import os
import sys
from datetime import datetime
from pathlib import Path

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from config import Tolerances, resolve_seed
from fw_cli import log
from models import ModelSpec
from report import VerificationReport, emit_report
from suites import IDENTITIES, run_convergence, run_fw1950, run_identities, run_model, run_sweep

REPORT_DIR = Path(__file__).resolve().parent.parent / 'reports'

MODELS = [
    (ModelSpec('free-dirac', {'m': 1.0, 'p': (0.0, 0.0, 1.0)}), None),
    (ModelSpec('commuting-case', {'m': 1.0, 'o': 0.8, 'e': 0.3, 'blocks': 3}), None),
    (ModelSpec('landau-dirac', {'m': 1.0, 'b': 0.1, 'pz': 0.0, 'n': 60}), 40),
    (ModelSpec('spin1-pseudo', {'seed': 0, 'scale': 0.3}), None),
]


def main():
    try:
        seed = resolve_seed(42)
        tolerances = Tolerances.from_env()
        log(f"Starting verification (seed {seed})")
        combined = VerificationReport(suite='full-verification', seed=seed)

        log("Symbolic identities through order 6")
        combined.extend(run_identities(sorted(IDENTITIES), 6, log))

        fw1950 = run_fw1950(3)
        verdict = fw1950.cases[0].details['verdict']
        log(f"1950 method: {verdict} (expected not-FW)")

        for spec, bulk_level in MODELS:
            log(f"Model {spec.kind}")
            combined.extend(run_model(spec, tolerances, bulk_level=bulk_level))

        log("Random-block sweep")
        combined.extend(run_sweep(200, seed, scale=0.5, tolerances=tolerances, progress=log))

        convergence_spec = ModelSpec('random-block', {'dim': 8, 'seed': seed, 'scale': 0.1})
        combined.extend(run_convergence(convergence_spec, [1, 2, 3], tolerances, progress=log))

        REPORT_DIR.mkdir(exist_ok=True)
        stamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        path = REPORT_DIR / f"verification_{stamp}.json"
        path.write_bytes(emit_report(combined, 'json'))
        sys.stdout.write(emit_report(combined, 'text').decode('utf-8'))

        s = combined.summary
        log(f"Report written to {path}")
        if not combined.all_passed or verdict != 'not-FW':
            print(f"❌ Verification found {s['failed']} failures and {s['errored']} errors")
            sys.exit(1)
        print(f"✅ {s['passed']} checks passed")

    except Exception as e:
        print(f"❌ Verification failed: {e}")

        import traceback
        traceback.print_exc()

        sys.exit(1)


if __name__ == "__main__":
    main()
