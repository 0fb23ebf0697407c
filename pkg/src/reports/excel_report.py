"""Excel workbook export for sweep results."""

import logging
import math
from datetime import datetime
from pathlib import Path
from typing import Dict, List

import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

from src.reports.csv_report import CSV_COLUMNS

logger = logging.getLogger(__name__)

# Leaves room for the header row.
MAX_DATA_ROWS = 1_048_575


class SweepWorkbookGenerator:
    """Write a sweep to a two-tab workbook: run summary and data."""

    # Style constants
    HEADER_FILL = PatternFill(start_color="1F4E79", end_color="1F4E79", fill_type="solid")
    HEADER_FONT = Font(name="Calibri", size=11, bold=True, color="FFFFFF")
    PASS_FILL = PatternFill(start_color="C6EFCE", end_color="C6EFCE", fill_type="solid")
    TITLE_FONT = Font(name="Calibri", size=16, bold=True, color="1F4E79")
    SUBTITLE_FONT = Font(name="Calibri", size=12, bold=True, color="1F4E79")
    KPI_FONT = Font(name="Calibri", size=14, bold=True)
    THIN_BORDER = Border(
        left=Side(style="thin"),
        right=Side(style="thin"),
        top=Side(style="thin"),
        bottom=Side(style="thin"),
    )

    def generate(
        self,
        frame: pd.DataFrame,
        metadata: Dict[str, object],
        output_path: str | Path,
    ) -> Path:
        """
        Generate the workbook.

        Args:
            frame: Sweep rows with the CSV columns.
            metadata: Run metadata, shown on the Summary tab.
            output_path: Path for the .xlsx file.

        Returns:
            Path to the generated workbook.
        """
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        wb = Workbook()
        self._create_summary_tab(wb, frame, metadata)
        self._create_data_tab(wb, frame)

        wb.save(str(output_path))
        logger.info("Workbook saved to %s", output_path)
        return output_path

    def _create_summary_tab(self, wb: Workbook, frame: pd.DataFrame, metadata: Dict[str, object]) -> None:
        """Create the Summary tab: run facts plus output ranges."""
        ws = wb.active
        ws.title = "Summary"
        ws.sheet_properties.tabColor = "1F4E79"

        ws.merge_cells("A1:D1")
        ws["A1"] = "Sweep Report"
        ws["A1"].font = self.TITLE_FONT
        ws["A1"].alignment = Alignment(horizontal="center")

        ws.merge_cells("A2:D2")
        ws["A2"] = f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}"
        ws["A2"].alignment = Alignment(horizontal="center")

        ws["A4"] = "Run"
        ws["A4"].font = self.SUBTITLE_FONT
        row = 5
        for key, value in metadata.items():
            if isinstance(value, (dict, list)):
                continue
            ws[f"A{row}"] = key
            ws[f"A{row}"].font = Font(bold=True)
            ws[f"B{row}"] = value if not isinstance(value, float) or math.isfinite(value) else str(value)
            row += 1

        row += 1
        ws[f"A{row}"] = "Outputs"
        ws[f"A{row}"].font = self.SUBTITLE_FONT
        row += 1
        for col, label in enumerate(["Output", "Min", "Max", "Mean"], start=1):
            cell = ws.cell(row=row, column=col, value=label)
            cell.font = self.HEADER_FONT
            cell.fill = self.HEADER_FILL
        row += 1

        for name in ("C", "C_out", "F", "F_asymptotic"):
            values = frame[name].dropna() if name in frame else pd.Series(dtype=float)
            if values.empty:
                continue
            ws[f"A{row}"] = name
            ws[f"A{row}"].font = Font(bold=True)
            for col, stat in zip("BCD", (values.min(), values.max(), values.mean())):
                ws[f"{col}{row}"] = float(stat)
                ws[f"{col}{row}"].number_format = "0.0000"
                ws[f"{col}{row}"].font = self.KPI_FONT
            if name in ("F", "F_asymptotic") and values.max() > 2 / 3:
                ws[f"C{row}"].fill = self.PASS_FILL
            row += 1

        ws.column_dimensions["A"].width = 25
        ws.column_dimensions["B"].width = 30

    def _create_data_tab(self, wb: Workbook, frame: pd.DataFrame) -> None:
        """Create the Data tab with one row per grid point."""
        ws = wb.create_sheet("Data")
        ws.sheet_properties.tabColor = "00B050"

        headers = list(CSV_COLUMNS)
        self._write_headers(ws, headers)

        if len(frame) > MAX_DATA_ROWS:
            logger.warning("Workbook truncated to %d of %d rows", MAX_DATA_ROWS, len(frame))
            frame = frame.iloc[:MAX_DATA_ROWS]

        frame = frame.reindex(columns=headers)
        for record in frame.itertuples(index=False):
            ws.append([None if isinstance(v, float) and math.isnan(v) else v for v in record])

        self._auto_width(ws, headers)

    def _write_headers(self, ws, headers: List[str]) -> None:
        """Write styled header row."""
        for col_idx, header in enumerate(headers, start=1):
            cell = ws.cell(row=1, column=col_idx, value=header)
            cell.font = self.HEADER_FONT
            cell.fill = self.HEADER_FILL
            cell.alignment = Alignment(horizontal="center")
            cell.border = self.THIN_BORDER

        ws.freeze_panes = "A2"
        ws.auto_filter.ref = f"A1:{get_column_letter(len(headers))}1"

    def _auto_width(self, ws, headers: List[str]) -> None:
        """Auto-adjust column widths."""
        for col_idx, header in enumerate(headers, start=1):
            col_letter = get_column_letter(col_idx)
            ws.column_dimensions[col_letter].width = max(len(header) + 4, 12)
