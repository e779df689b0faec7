#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""异常定义模块

每个异常携带 CLI 退出码: 0 通过, 1 校验失败, 2 无法判定, 3 容量超限, 4 用法错误。
"""

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_INCONCLUSIVE = 2
EXIT_CAPACITY = 3
EXIT_USAGE = 4


class SandwichError(Exception):
    """工具内所有异常的基类"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        return {
            'error': type(self).__name__,
            'message': self.message,
            'details': {k: str(v) for k, v in self.details.items()},
        }


class UsageError(SandwichError):
    """参数或调用方式错误"""


class RingValidationError(SandwichError):
    """环结构常数不满足交换律/结合律/单位元"""

    def __init__(self, message: str, triple=None, **details):
        super().__init__(message, triple=triple, **details)
        self.triple = triple


class CatalogError(SandwichError):
    """环目录文件解析失败"""

    def __init__(self, message: str, line_no: int = 0, **details):
        super().__init__(f"第 {line_no} 行: {message}" if line_no else message, line_no=line_no, **details)
        self.line_no = line_no


class CapacityError(SandwichError):
    """超过容量上限 (枚举维数或闭包规模)"""

    exit_code = EXIT_CAPACITY


class PatternError(SandwichError):
    """矩阵不具备要求的根元素乘积形状"""


class RankError(SandwichError):
    """秩 n 不足以执行该构造"""


class UnsupportedError(SandwichError):
    """当前实例不支持该判定 (例如 1 不属于 Λ)"""
