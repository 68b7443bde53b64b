"""
读取得分矩阵文件：每行一个矩阵行，元素用逗号分隔，取值在 [0,1] 内
"""
import csv
from pathlib import Path

from pydantic import ValidationError

from source.chernoff.schema.selector import ScoreMatrix
from source.chernoff.utils.errors import DomainError, ShapeError
from source.chernoff.utils.log_utils import log


def parse_score_matrix(text: str, source: str = "<string>") -> ScoreMatrix:
    rows = []
    for line_no, record in enumerate(csv.reader(text.splitlines()), start=1):
        if not record or all(not cell.strip() for cell in record):
            continue
        try:
            rows.append([float(cell) for cell in record])
        except ValueError as e:
            raise DomainError(f"{source}:{line_no}: 无法解析的数值 ({e})") from e
        if len(rows[-1]) != len(rows[0]):
            raise ShapeError(f"{source}:{line_no}: 该行有 {len(rows[-1])} 个元素，第一行有 {len(rows[0])} 个")
    if not rows:
        raise ShapeError(f"{source}: 矩阵为空")
    try:
        return ScoreMatrix(entries=rows)
    except ValidationError as e:
        raise DomainError(f"{source}: {e.errors()[0]['msg']}") from e


def load_score_matrix(path: str | Path) -> ScoreMatrix:
    """文件不存在或不可读时抛出 OSError"""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    matrix = parse_score_matrix(text, source=str(path))
    log.debug(f"读取得分矩阵 {path}: {matrix.m}×{matrix.n}")
    return matrix
