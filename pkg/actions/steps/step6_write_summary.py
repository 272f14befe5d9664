"""Step 6: Write the summary and per-check CSV tables."""

from pathlib import Path

from src.hopfcorr.core.report import Report
from src.hopfcorr.utils.config import get_output_dir
from src.hopfcorr.utils.tables import reports_frame, summary_frame, write_table


def write_summary(reports: list[Report], outdir: Path | None = None) -> Path:
    """
    Write summary.csv (one row per report) and checks.csv (one row per check).

    Args:
        reports: Reports of all previous steps
        outdir: Target directory (HOPFCORR_OUTPUT_DIR by default)

    Returns:
        Path of summary.csv
    """
    print("-" * 80)
    print(" 💾 Step 6: Writing summary tables...")

    outdir = Path(outdir) if outdir is not None else get_output_dir()
    summary = summary_frame(reports)
    path = write_table(summary, outdir / 'summary.csv')
    write_table(reports_frame(reports), outdir / 'checks.csv')

    failed = summary[summary['Status'] != 'pass']
    print(f"📊 {len(summary)} reports, {len(failed)} not passing")
    for _, row in failed.iterrows():
        print(f"   ❌ {row['Command']}: {row['Failed']} failed checks")
    print(f"✅ Saved {path}")
    return path
