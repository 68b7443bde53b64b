"""
Excel生成工具
用于将界的对比表导出为Excel文件
"""
from pathlib import Path
from typing import Sequence

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

from source.chernoff.schema.simulation import ScorecardRow, SimulationSpec
from source.chernoff.tools.tool_table_render import SCORECARD_HEADER
from source.chernoff.utils.errors import DomainError
from source.chernoff.utils.log_utils import log

HEADER_FILL = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
HEADER_FONT = Font(bold=True, color="FFFFFF", size=11)
HEADER_ALIGNMENT = Alignment(horizontal="center", vertical="center", wrap_text=True)
BORDER = Border(
    left=Side(style='thin'),
    right=Side(style='thin'),
    top=Side(style='thin'),
    bottom=Side(style='thin')
)
# 12 位有效数字
NUMBER_FORMAT = "0.00000000000E+00"


def _write_header(ws, headers: Sequence[str]) -> None:
    for col_idx, header in enumerate(headers, start=1):
        cell = ws.cell(row=1, column=col_idx, value=header)
        cell.fill = HEADER_FILL
        cell.font = HEADER_FONT
        cell.alignment = HEADER_ALIGNMENT
        cell.border = BORDER
    ws.row_dimensions[1].height = 24


def export_scorecard(rows: Sequence[ScorecardRow], output_path: str | Path,
                     spec: SimulationSpec | None = None) -> Path:
    """对比表写入 "scorecard" 工作表；给出 spec 时另加 "simulation" 工作表记录模型与种子

    写文件失败时抛出 OSError，由调用方处理。
    """
    if not rows:
        raise DomainError("对比表至少需要一行")
    output_file = Path(output_path)
    output_file.parent.mkdir(parents=True, exist_ok=True)

    wb = Workbook()
    ws = wb.active
    ws.title = "scorecard"
    _write_header(ws, SCORECARD_HEADER)

    for row_idx, row in enumerate(rows, start=2):
        for col_idx, column in enumerate(SCORECARD_HEADER, start=1):
            value = getattr(row, column)
            cell = ws.cell(row=row_idx, column=col_idx, value=value)
            if column not in ("t", "k"):
                cell.number_format = NUMBER_FORMAT
            cell.alignment = Alignment(horizontal="right")
            cell.border = BORDER

    for col_idx in range(1, len(SCORECARD_HEADER) + 1):
        ws.column_dimensions[get_column_letter(col_idx)].width = 8 if col_idx <= 2 else 20
    # 冻结表头
    ws.freeze_panes = "A2"

    if spec is not None:
        info_ws = wb.create_sheet("simulation")
        _write_header(info_ws, ["参数", "取值"])
        info = [("model", spec.generator.kind), ("trials", spec.trials), ("seed", str(spec.seed))]
        info += [(key, str(value)) for key, value in spec.generator.model_dump().items() if key != "kind"]
        for row_idx, (key, value) in enumerate(info, start=2):
            info_ws.cell(row=row_idx, column=1, value=key).border = BORDER
            info_ws.cell(row=row_idx, column=2, value=value).border = BORDER
        info_ws.column_dimensions["A"].width = 12
        info_ws.column_dimensions["B"].width = 40

    wb.save(output_file)
    log.info(f"成功生成Excel文件: {output_file}，包含 {len(rows)} 行")
    return output_file
