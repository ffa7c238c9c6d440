# -*- coding: utf-8 -*-
"""
随机测试服务
按种子生成随机 DTD、访问规范、文档与查询，批量验证：
- 重写闭包：Q(T_v) 与 Rewrite(Q)(T) 一致（完整算法与快速路径）
- 可访问性：Aᵃᶜᶜ 的求值结果与按定义判定一致，+/- 标注与按定义判定一致
- 求值器自检：带索引的求值器与朴素求值器一致
"""
import random
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Any

from tqdm import tqdm

from config import Settings
from core import (
    AccessSpec, AnnKind, Annotation, Dtd, ReachIndex, GenConfig, AccessLabel, XmlTree,
    Evaluator, ReferenceEvaluator,
    parse_dtd, serialize_dtd, parse_spec, serialize_spec, compat_mode, build_reach_index,
    derive_view, build_kit, make_context, rewrite, rewrite_fast, generate, materialize,
    oracle_accessible, first_difference, conforms, serialize,
)
from core.content_model import ContentModel, Name, Seq, Alt, Star, Text, TEXT, EMPTY
from core.materialize import accessibility_mismatches
from core.xpath_ast import (
    Axis, Path, Qual, Step, Union_, Group, PathExists, TextEquals, NodeEquals, Position,
    And, Or, Not, WILDCARD, slash,
)
from utils.logger import logger, get_run_logger

_TYPE_NAMES = ("A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L")

# 求值器自检的文档规模上限（元素数）
EVALUATOR_MAX_NODES = 100


# ==================== 随机构造 ====================

class RandomSchemaFactory:
    """随机 DTD 与访问规范"""

    def __init__(self, rng: random.Random, max_types: int, max_annotations: int,
                 text_alphabet: Sequence[str], root_loop: float = 0.2):
        self.rng = rng
        self.max_types = max(2, min(max_types, len(_TYPE_NAMES) + 1))
        self.max_annotations = max_annotations
        self.text_alphabet = list(text_alphabet)
        self.root_loop = root_loop

    def dtd(self) -> Dtd:
        """
        前向引用构成 DAG，回边只出现在星号内，因此一定存在有限推导；
        至少一条回边指向前向树中的祖先，保证递归；
        以 root_loop 的概率再加一条指向根的回边，使根类型也递归
        """
        rng = self.rng
        count = rng.randint(2, self.max_types)
        names = ["root"] + list(_TYPE_NAMES[:count - 1])
        forward: Dict[int, List[int]] = {i: [] for i in range(count)}
        parent_of = [-1] * count
        for i in range(1, count):
            parent_of[i] = rng.randrange(0, i)
            forward[parent_of[i]].append(i)
        back: Dict[int, List[int]] = {i: [] for i in range(count)}
        looped = rng.randrange(1, count)
        chain = [looped]
        while parent_of[chain[-1]] > 0:
            chain.append(parent_of[chain[-1]])
        back[looped].append(rng.choice(chain))
        for i in range(1, count):
            if rng.random() < 0.2:
                target = rng.randint(1, i)
                if target not in back[i]:
                    back[i].append(target)
        if rng.random() < self.root_loop:
            back[rng.randrange(1, count)].append(0)

        productions: Dict[str, ContentModel] = {}
        for i, name in enumerate(names):
            particles: List[ContentModel] = [self._wrap(Name(names[c])) for c in forward[i]]
            particles.extend(Star(Name(names[j])) for j in back[i])
            if not particles:
                productions[name] = TEXT if rng.random() < 0.6 else EMPTY
                continue
            rng.shuffle(particles)
            productions[name] = self._combine(particles)
        raw = Dtd(element_types=tuple(names), productions=productions, root="root")
        return parse_dtd(serialize_dtd(raw))

    def _wrap(self, particle: ContentModel) -> ContentModel:
        roll = self.rng.random()
        if roll < 0.3:
            return Star(particle)
        if roll < 0.5:
            return Alt((particle, EMPTY))
        return particle

    def _combine(self, particles: List[ContentModel]) -> ContentModel:
        if len(particles) == 1:
            return particles[0]
        if len(particles) > 2 and self.rng.random() < 0.4:
            cut = self.rng.randint(1, len(particles) - 1)
            return Seq((self._combine(particles[:cut]), self._combine(particles[cut:])))
        if self.rng.random() < 0.5:
            return Seq(tuple(particles))
        return Alt(tuple(particles))

    def spec(self, dtd: Dtd) -> AccessSpec:
        """注解数不超过 max_annotations，五种取值均匀抽取，条件为片段 X"""
        rng = self.rng
        reach = build_reach_index(dtd)
        edges = [(p, c) for p in dtd.element_types for c in reach.children[p]]
        chosen = rng.sample(edges, rng.randint(0, min(self.max_annotations, len(edges))))
        entries = {}
        for parent, child in chosen:
            kind = rng.choice(list(AnnKind))
            qual = QueryFactory(rng, dtd, reach, self.text_alphabet).qual([child], 1) if kind.is_conditional else None
            entries[(parent, child)] = Annotation(kind, qual)
        # 经文本往返，保证随机规范也能被解析器接受
        return parse_spec(serialize_spec(AccessSpec(dtd=dtd, entries=entries)), dtd)


class QueryFactory:
    """
    在给定 DTD（通常是视图 DTD）上生成查询与限定词

    upward=False 时只生成片段 X（child / descendant）；
    upward=True 时混入 parent / ancestor 步骤（主路径的第一步除外）
    """

    def __init__(self, rng: random.Random, dtd: Dtd, reach: ReachIndex, text_alphabet: Sequence[str],
                 upward: bool = False):
        self.rng = rng
        self.dtd = dtd
        self.reach = reach
        self.text_alphabet = list(text_alphabet)
        self.upward = upward

    def _relation(self, axis: Axis) -> Dict[str, Tuple[str, ...]]:
        return {
            Axis.CHILD: self.reach.children,
            Axis.DESCENDANT: self.reach.descendants,
            Axis.PARENT: self.reach.parents,
            Axis.ANCESTOR: self.reach.ancestors,
        }[axis]

    def _pick_step(self, names: Sequence[str], allow_upward: bool) -> Step:
        rng = self.rng
        if allow_upward and rng.random() < 0.25:
            axis = Axis.PARENT if rng.random() < 0.5 else Axis.ANCESTOR
        else:
            axis = Axis.CHILD if rng.random() < 0.6 else Axis.DESCENDANT
        relation = self._relation(axis)
        candidates = sorted({c for n in names for c in relation.get(n, ())})
        roll = rng.random()
        if roll < 0.15 or not candidates:
            label = WILDCARD if rng.random() < 0.5 else rng.choice(self.dtd.element_types)
        else:
            label = rng.choice(candidates)
        return Step(axis, label)

    def _targets(self, step: Step, names: Sequence[str]) -> List[str]:
        relation = self._relation(step.axis)
        reached = {c for n in names for c in relation.get(n, ())}
        if step.label == WILDCARD:
            return sorted(reached)
        return [step.label] if step.label in reached else []

    def _path(self, names: Sequence[str], length: int, with_quals: bool,
              from_root: bool = False) -> Tuple[Path, List[str]]:
        steps = []
        current = list(names)
        for index in range(length):
            step = self._pick_step(current, self.upward and not (from_root and index == 0))
            targets = self._targets(step, current)
            if with_quals and self.rng.random() < 0.3:
                step = Step(step.axis, step.label, (self.qual(targets or [step.label], 1),))
            steps.append(step)
            current = targets
        return slash(*steps), current

    def qual(self, names: Sequence[str], depth: int) -> Qual:
        """相对类型集合 names 的随机限定词"""
        rng = self.rng
        roll = rng.random()
        if depth > 0 and roll < 0.15:
            return Not(self.qual(names, depth - 1))
        if depth > 0 and roll < 0.3:
            op = And if rng.random() < 0.5 else Or
            return op(self.qual(names, depth - 1), self.qual(names, depth - 1))
        path, targets = self._path(names, rng.randint(1, 2), False)
        if any(isinstance(self.dtd.productions.get(t), Text) for t in targets) and rng.random() < 0.6:
            return TextEquals(path, rng.choice(self.text_alphabet))
        return PathExists(path)

    def query(self, max_depth: int) -> Path:
        """从根出发的查询，深度不超过 max_depth，偶尔是两个分支的并集"""
        rng = self.rng
        branches = 2 if rng.random() < 0.15 else 1
        paths = []
        for _ in range(branches):
            path, _ = self._path([self.dtd.root], rng.randint(1, max(1, max_depth)), True, from_root=True)
            paths.append(path)
        return paths[0] if len(paths) == 1 else Union_(tuple(paths))


class UpwardQueryFactory:
    """X↑[n,=] 随机查询（求值器自检用），不参考 DTD 结构"""

    _AXES = tuple(Axis)

    def __init__(self, rng: random.Random, labels: Sequence[str], text_alphabet: Sequence[str]):
        self.rng = rng
        self.labels = list(labels) + [WILDCARD]
        self.text_alphabet = list(text_alphabet)

    def step(self, depth: int) -> Path:
        rng = self.rng
        quals: List[Qual] = []
        while depth > 0 and rng.random() < 0.35:
            quals.append(Position(rng.randint(1, 3)) if rng.random() < 0.3 else self.qual(depth - 1))
        if depth > 0 and rng.random() < 0.1:
            inner = Union_((self.path(depth - 1), self.path(depth - 1)))
            return Group(inner, tuple(quals))
        return Step(rng.choice(self._AXES), rng.choice(self.labels), tuple(quals))

    def path(self, depth: int) -> Path:
        return slash(*(self.step(depth) for _ in range(self.rng.randint(1, 3))))

    def qual(self, depth: int) -> Qual:
        rng = self.rng
        roll = rng.random()
        if depth > 0 and roll < 0.15:
            return Not(self.qual(depth - 1))
        if depth > 0 and roll < 0.3:
            op = And if rng.random() < 0.5 else Or
            return op(self.qual(depth - 1), self.qual(depth - 1))
        if roll < 0.45:
            return TextEquals(self.path(0), rng.choice(self.text_alphabet))
        if roll < 0.6:
            return NodeEquals(self.path(depth), Step(Axis.SELF, rng.choice(self.labels)))
        return PathExists(self.path(depth))


# ==================== 报告 ====================

@dataclass
class FuzzFailure:
    index: int
    seed: int
    kind: str
    query: str
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return {"index": self.index, "seed": self.seed, "kind": self.kind,
                "query": self.query, "detail": self.detail}


@dataclass
class FuzzReport:
    cases: int
    failures: List[FuzzFailure] = field(default_factory=list)
    empty_rewrites: int = 0
    conformance_failures: int = 0
    checked_nodes: int = 0
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def count(self, kind: str) -> int:
        return sum(1 for f in self.failures if f.kind == kind)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cases": self.cases,
            "ok": self.ok,
            "failures": [f.to_dict() for f in self.failures],
            "empty_rewrites": self.empty_rewrites,
            "conformance_failures": self.conformance_failures,
            "checked_nodes": self.checked_nodes,
            "elapsed": round(self.elapsed, 3),
        }


@dataclass
class _CaseResult:
    failures: List[FuzzFailure] = field(default_factory=list)
    empty_rewrites: int = 0
    conformance_failed: bool = False
    checked_nodes: int = 0


# ==================== 服务 ====================

class FuzzService:
    """随机测试批量执行器，失败用 (index, seed) 即可复现"""

    def __init__(
        self,
        seed: Optional[int] = None,
        max_types: Optional[int] = None,
        max_annotations: Optional[int] = None,
        target_nodes: Optional[int] = None,
        query_depth: Optional[int] = None,
        max_workers: Optional[int] = None,
        text_alphabet: Optional[Sequence[str]] = None,
        upward_ratio: float = 0.5
    ):
        self.seed = Settings.FUZZ_SEED if seed is None else seed
        self.max_types = max_types or Settings.FUZZ_MAX_TYPES
        self.max_annotations = Settings.FUZZ_MAX_ANNOTATIONS if max_annotations is None else max_annotations
        self.target_nodes = target_nodes or Settings.FUZZ_TARGET_NODES
        self.query_depth = query_depth or Settings.FUZZ_QUERY_DEPTH
        self.max_workers = max_workers or Settings.FUZZ_MAX_WORKERS
        self.text_alphabet = tuple(text_alphabet or Settings.GEN_TEXT_ALPHABET)
        self.upward_ratio = upward_ratio
        logger.info(
            f"[随机测试] 初始化: seed={self.seed}, 类型数<={self.max_types}, "
            f"注解数<={self.max_annotations}, 文档节点≈{self.target_nodes}, 查询深度<={self.query_depth}, "
            f"向上轴查询比例 {self.upward_ratio}"
        )

    def case_seed(self, index: int) -> int:
        return self.seed * 1_000_003 + index

    def _gen_config(self, rng: random.Random, target_nodes: int) -> GenConfig:
        return GenConfig(
            seed=rng.randrange(2 ** 31),
            max_depth=8,
            star_geometric=0.5,
            text_alphabet=self.text_alphabet,
            target_nodes=target_nodes,
        )

    # -------- 闭包与可访问性 --------
    def run_case(self, index: int) -> _CaseResult:
        seed = self.case_seed(index)
        rng = random.Random(seed)
        factory = RandomSchemaFactory(rng, self.max_types, self.max_annotations, self.text_alphabet)
        dtd = factory.dtd()
        spec = factory.spec(dtd)
        if rng.random() < 0.2:
            spec = compat_mode(spec)
        tree = generate(dtd, self._gen_config(rng, self.target_nodes))

        view = derive_view(spec)
        kit = build_kit(spec)
        evaluator = Evaluator(tree)
        result = _CaseResult(checked_nodes=tree.element_count())

        def fail(kind: str, query: str, detail: str) -> None:
            result.failures.append(FuzzFailure(index, seed, kind, query, detail))

        acc_holds = {n: evaluator.eval_qual(kit.acc, n) for n in tree.elements()}
        for node in accessibility_mismatches(tree, spec, acc_holds, evaluator):
            fail("acc", "", f"{tree.node_path(node)}: Aᵃᶜᶜ={acc_holds[node]}")

        mv = materialize(tree, spec, evaluator)
        for node in tree.elements():
            labelled = mv.labels[node] is AccessLabel.PLUS
            if labelled != oracle_accessible(tree, spec, node, evaluator):
                fail("labels", "", f"{tree.node_path(node)}: 标注为 {mv.labels[node].value}")

        if not conforms(mv.tree, view.view):
            result.conformance_failed = True

        upward = rng.random() < self.upward_ratio
        query = QueryFactory(rng, view.view, view.reach, self.text_alphabet, upward=upward).query(self.query_depth)
        query_text = serialize(query)
        view_nodes = Evaluator(mv.tree).eval(query, 0)
        ctx = make_context(view, kit)
        for name, rewriter in (("rewrite", rewrite), ("rewrite_fast", rewrite_fast)):
            outcome = rewriter(query, ctx)
            if outcome.is_empty:
                result.empty_rewrites += 1
                original_nodes = []
            else:
                original_nodes = evaluator.eval(outcome.query, 0)
            difference = first_difference(view_nodes, mv.node_map, original_nodes)
            if difference is not None:
                fail(name, query_text, f"见证节点 {tree.node_path(difference[0])} 只出现在 {difference[1]} 一侧")
        return result

    def run(self, cases: Optional[int] = None, progress: bool = False) -> FuzzReport:
        """
        执行闭包与可访问性随机测试

        Args:
            cases: 用例数，默认 Settings.FUZZ_CASES
            progress: 是否显示 tqdm 进度条

        Returns:
            FuzzReport
        """
        cases = Settings.FUZZ_CASES if cases is None else cases
        report = FuzzReport(cases=cases)
        start = time.time()
        with ThreadPoolExecutor(max_workers=max(1, self.max_workers)) as executor:
            futures = {executor.submit(self.run_case, i): i for i in range(cases)}
            for future in tqdm(as_completed(futures), total=cases, disable=not progress, desc="fuzz"):
                index = futures[future]
                try:
                    result = future.result()
                except Exception as e:
                    logger.error(f"[随机测试] 用例 {index} 执行异常: {e}", exc_info=True)
                    report.failures.append(FuzzFailure(index, self.case_seed(index), "error", "", str(e)))
                    continue
                report.failures.extend(result.failures)
                report.empty_rewrites += result.empty_rewrites
                report.conformance_failures += int(result.conformance_failed)
                report.checked_nodes += result.checked_nodes
        report.failures.sort(key=lambda f: (f.index, f.kind))
        report.elapsed = time.time() - start

        if report.conformance_failures:
            logger.warning(f"[随机测试] {report.conformance_failures} 个物化视图不符合视图 DTD")
        logger.info(f"[随机测试] 完成 {cases} 个用例，失败 {len(report.failures)}，耗时 {report.elapsed:.2f}s")
        self._save(report, "fuzz")
        return report

    # -------- 求值器自检 --------
    def evaluator_case(self, index: int) -> Tuple[XmlTree, Path, int]:
        """求值器自检的输入：不超过 EVALUATOR_MAX_NODES 个元素的文档、查询与上下文节点"""
        rng = random.Random(self.case_seed(index))
        dtd = RandomSchemaFactory(rng, self.max_types, 0, self.text_alphabet).dtd()
        limit = min(self.target_nodes, EVALUATOR_MAX_NODES)
        tree = generate(dtd, self._gen_config(rng, limit)).truncated(limit)
        query = UpwardQueryFactory(rng, dtd.element_types, self.text_alphabet).path(2)
        context = rng.choice(list(tree.elements()))
        return tree, query, context

    def run_evaluator_case(self, index: int) -> List[FuzzFailure]:
        tree, query, context = self.evaluator_case(index)
        fast = Evaluator(tree).eval(query, context)
        naive = ReferenceEvaluator(tree).eval(query, context)
        if fast != naive:
            return [FuzzFailure(index, self.case_seed(index), "evaluator", serialize(query),
                                f"上下文 {tree.node_path(context)}: {fast} != {naive}")]
        return []

    def run_evaluator(self, cases: int = 500, progress: bool = False) -> FuzzReport:
        """带索引求值器与朴素求值器的对照"""
        report = FuzzReport(cases=cases)
        start = time.time()
        with ThreadPoolExecutor(max_workers=max(1, self.max_workers)) as executor:
            futures = [executor.submit(self.run_evaluator_case, i) for i in range(cases)]
            for future in tqdm(as_completed(futures), total=cases, disable=not progress, desc="evaluator"):
                report.failures.extend(future.result())
        report.failures.sort(key=lambda f: f.index)
        report.elapsed = time.time() - start
        logger.info(f"[随机测试] 求值器自检 {cases} 个用例，失败 {len(report.failures)}")
        self._save(report, "fuzz-evaluator")
        return report

    def _save(self, report: FuzzReport, run_type: str) -> None:
        run_logger = get_run_logger()
        if run_logger:
            run_logger.save_log("", "PASS" if report.ok else "FAIL", run_type, report.to_dict())
