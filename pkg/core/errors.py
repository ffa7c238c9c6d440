# -*- coding: utf-8 -*-
"""
异常定义
解析、校验与生成阶段的统一异常层级，命令行层将其全部映射为退出码 2
"""
from typing import Optional


class XSecViewError(Exception):
    """安全视图系统的基础异常"""


class ParseError(XSecViewError):
    """带位置信息的语法错误基类"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        self.detail = message
        if position is not None:
            message = f"{message} (位置 {position})"
        super().__init__(message)


class DtdSyntaxError(ParseError):
    """DTD 声明格式错误"""


class QuerySyntaxError(ParseError):
    """查询文本格式错误"""


class XmlSyntaxError(ParseError):
    """XML 文档格式错误"""


class AnnotationSyntaxError(ParseError):
    """访问规范文件格式错误"""


class UndeclaredTypeError(XSecViewError):
    """内容模型引用了未声明的元素类型"""


class NoRootError(XSecViewError):
    """DTD 为空，无法确定根类型"""


class UnreachableTypeError(XSecViewError):
    """存在从根类型不可达的元素类型"""


class FragmentError(XSecViewError):
    """表达式超出调用方要求的 XPath 片段"""


class UnknownEdgeError(XSecViewError):
    """注解的 (父类型, 子类型) 不是 DTD 中的边"""


class DuplicateAnnotationError(XSecViewError):
    """同一条边被重复注解"""


class UnsupportedFeatureError(XSecViewError):
    """输入使用了模型之外的特性（属性、注释、混合内容等）"""


class NonTerminatingError(XSecViewError):
    """某个元素类型不存在有限推导"""


class EmptySetError(XSecViewError):
    """fs 融合函数收到空集合"""
