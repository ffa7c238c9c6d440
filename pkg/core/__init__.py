# -*- coding: utf-8 -*-
"""
核心算法模块包初始化
"""
from .errors import (
    XSecViewError, ParseError, DtdSyntaxError, QuerySyntaxError, XmlSyntaxError,
    AnnotationSyntaxError, UndeclaredTypeError, NoRootError, UnreachableTypeError,
    FragmentError, UnknownEdgeError, DuplicateAnnotationError, UnsupportedFeatureError,
    NonTerminatingError, EmptySetError,
)
from .dtd import Dtd, ReachIndex, parse_dtd, serialize_dtd, build_reach_index, is_recursive
from .xpath_ast import (
    Axis, FragmentClass, parse_xpath, parse_qual, serialize, serialize_qual, classify,
)
from .access_spec import AccessSpec, AnnKind, Annotation, parse_spec, compat_mode, serialize_spec
from .view_derive import DtdView, ViewStats, derive_view, view_stats
from .predicates import PredicateKit, build_kit, a_elem, fs
from .rewriter import (
    RewriteContext, RewriteOutcome, RewriteStats, make_context, rewrite, rewrite_fast, rw_pred,
)
from .xml_tree import XmlTree, XmlTreeBuilder, parse_xml, to_xml, conforms
from .evaluator import Evaluator, ReferenceEvaluator
from .materialize import (
    AccessLabel, MaterializedView, oracle_accessible, label_nodes, materialize,
    answer_equal, first_difference,
)
from .docgen import GenConfig, generate, generate_corpus, shortest_derivations

__all__ = [
    'XSecViewError', 'ParseError', 'DtdSyntaxError', 'QuerySyntaxError', 'XmlSyntaxError',
    'AnnotationSyntaxError', 'UndeclaredTypeError', 'NoRootError', 'UnreachableTypeError',
    'FragmentError', 'UnknownEdgeError', 'DuplicateAnnotationError', 'UnsupportedFeatureError',
    'NonTerminatingError', 'EmptySetError',
    'Dtd', 'ReachIndex', 'parse_dtd', 'serialize_dtd', 'build_reach_index', 'is_recursive',
    'Axis', 'FragmentClass', 'parse_xpath', 'parse_qual', 'serialize', 'serialize_qual', 'classify',
    'AccessSpec', 'AnnKind', 'Annotation', 'parse_spec', 'compat_mode', 'serialize_spec',
    'DtdView', 'ViewStats', 'derive_view', 'view_stats',
    'PredicateKit', 'build_kit', 'a_elem', 'fs',
    'RewriteContext', 'RewriteOutcome', 'RewriteStats', 'make_context', 'rewrite', 'rewrite_fast', 'rw_pred',
    'XmlTree', 'XmlTreeBuilder', 'parse_xml', 'to_xml', 'conforms',
    'Evaluator', 'ReferenceEvaluator',
    'AccessLabel', 'MaterializedView', 'oracle_accessible', 'label_nodes', 'materialize',
    'answer_equal', 'first_difference',
    'GenConfig', 'generate', 'generate_corpus', 'shortest_derivations',
]
