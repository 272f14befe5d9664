"""Acceptance workflow: run every preset through the full pipeline.

This script runs:
1. Preset validation (confluence, Hopf axioms, admissibility) and the negative control
2. Cocycle <-> functional correspondence, round trips and the identity suite
3. Gaussian / non-Gaussian decomposition
4. Corep matrix identities
5. Properness on the free group
6. Summary CSV tables
"""

import sys
from pathlib import Path

# Add project root to path
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from actions.steps import (
    verify_presets,
    run_correspondence,
    run_decomposition,
    run_matrix_identities,
    run_properness,
    write_summary,
)


def main():
    """Run the complete acceptance workflow."""
    print("=" * 80)
    print("🚀 hopfcorr Acceptance Workflow")
    print("=" * 80)
    print()

    try:
        reports = []
        reports.extend(verify_presets())
        reports.extend(run_correspondence())
        reports.extend(run_decomposition())
        reports.extend(run_matrix_identities())
        reports.extend(run_properness())
        write_summary(reports)

    except Exception as e:
        print(f"❌ Workflow failed: {e}\n")
        import traceback
        traceback.print_exc()
        sys.exit(1)

    failed = [r for r in reports if not r.passed]
    print()
    print("=" * 80)
    if failed:
        print(f"❌ {len(failed)} of {len(reports)} reports did not pass")
        print("=" * 80)
        sys.exit(1)
    print("✨ Workflow complete!")
    print("=" * 80)


if __name__ == '__main__':
    main()
