"""
Derivative-based RELAX-NG validation

A pattern matches a node sequence when the residual pattern left after
consuming every attribute and child is nullable. Attributes are consumed
as an unordered set, children in document order; interleave tries both
operands for each child. Element content checks are memoized per call.

When a tree does not match, a second pass walks the same derivatives to
locate the deepest element whose content cannot be matched and the
production responsible for it.
"""

import logging
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pmxml.core.infoset import CDataChild, TextChild, XmlElement, XmlTree, is_whitespace
from pmxml.schema.datatypes import collapse_whitespace, match_datatype
from pmxml.schema.patterns import (
    EMPTY,
    NOT_ALLOWED,
    Attribute,
    Choice,
    Data,
    Element,
    Empty,
    Group,
    Interleave,
    NamedRef,
    NotAllowed,
    OneOrMore,
    Pattern,
    PatternGraph,
    Text,
    ValueLiteral,
    mk_choice,
    mk_group,
    mk_interleave,
    mk_one_or_more,
)

logger = logging.getLogger(__name__)


class Violation(BaseModel):
    """One reason a tree does not conform"""

    model_config = ConfigDict(frozen=True)

    path: str = Field(..., description="Element path, e.g. /object/property[3]")
    rule: str = Field(..., description="Production the failing content belongs to")
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.rule}: {self.message}"


class ValidationReport(BaseModel):
    """Outcome of validating one tree"""

    model_config = ConfigDict(frozen=True)

    valid: bool
    violations: tuple[Violation, ...] = ()

    @model_validator(mode="after")
    def _valid_iff_clean(self) -> "ValidationReport":
        if self.valid != (not self.violations):
            raise ValueError("valid must be true exactly when there are no violations")
        return self


def _merge_text(children) -> list:
    """Element children stay as they are; adjacent text and CDATA become one string"""
    merged: list = []
    pending: list[str] = []
    for child in children:
        if isinstance(child, XmlElement):
            if pending:
                merged.append("".join(pending))
                pending = []
            merged.append(child)
        elif isinstance(child, (TextChild, CDataChild)):
            pending.append(child.text)
    if pending:
        merged.append("".join(pending))
    return merged


def _snippet(text: str) -> str:
    text = collapse_whitespace(text)
    return text if len(text) <= 30 else text[:27] + "..."


class _Matcher:
    """Derivative computations over one graph, with call-local memo tables"""

    def __init__(self, graph: PatternGraph, namespace: str):
        self.graph = graph
        self.namespace = namespace
        self._nullable: dict[Pattern, bool] = {}
        self._has_attributes: dict[str, bool] = {}
        self._element_memo: dict[tuple[Pattern, int], bool] = {}

    # ------------------------------------------------------------------
    # nullable
    # ------------------------------------------------------------------

    def nullable(self, p: Pattern) -> bool:
        if isinstance(p, (Empty, Text)):
            return True
        if isinstance(p, Choice):
            return self.nullable(p.left) or self.nullable(p.right)
        if isinstance(p, (Group, Interleave)):
            return self.nullable(p.left) and self.nullable(p.right)
        if isinstance(p, OneOrMore):
            return self.nullable(p.pattern)
        if isinstance(p, NamedRef):
            if p not in self._nullable:
                # a reference reached again while being computed contributes nothing
                self._nullable[p] = False
                self._nullable[p] = self.nullable(self.graph.lookup(p.name))
            return self._nullable[p]
        return False

    def has_attributes(self, name: str) -> bool:
        """Whether a production can consume attributes of the element it appears in"""
        if name not in self._has_attributes:
            self._has_attributes[name] = False
            self._has_attributes[name] = self._contains_attribute(self.graph.lookup(name))
        return self._has_attributes[name]

    def _contains_attribute(self, p: Pattern) -> bool:
        if isinstance(p, Attribute):
            return True
        if isinstance(p, (Choice, Group, Interleave)):
            return self._contains_attribute(p.left) or self._contains_attribute(p.right)
        if isinstance(p, OneOrMore):
            return self._contains_attribute(p.pattern)
        if isinstance(p, NamedRef):
            return self.has_attributes(p.name)
        return False

    # ------------------------------------------------------------------
    # attributes
    # ------------------------------------------------------------------

    def value_matches(self, p: Pattern, value: str) -> bool:
        if self.nullable(p) and is_whitespace(value):
            return True
        return self.nullable(self.text_deriv(p, value))

    def att_deriv(self, p: Pattern, name: str, value: str) -> Pattern:
        if isinstance(p, Choice):
            return mk_choice(self.att_deriv(p.left, name, value), self.att_deriv(p.right, name, value))
        if isinstance(p, Group):
            return mk_choice(
                mk_group(self.att_deriv(p.left, name, value), p.right),
                mk_group(p.left, self.att_deriv(p.right, name, value)),
            )
        if isinstance(p, Interleave):
            return mk_choice(
                mk_interleave(self.att_deriv(p.left, name, value), p.right),
                mk_interleave(p.left, self.att_deriv(p.right, name, value)),
            )
        if isinstance(p, OneOrMore):
            return mk_group(self.att_deriv(p.pattern, name, value), mk_choice(p, EMPTY))
        if isinstance(p, Attribute):
            if p.name == name and self.value_matches(p.content, value):
                return EMPTY
            return NOT_ALLOWED
        if isinstance(p, NamedRef) and self.has_attributes(p.name):
            return self.att_deriv(self.graph.lookup(p.name), name, value)
        return NOT_ALLOWED

    def close(self, p: Pattern) -> Pattern:
        """Residual once the start tag ends: attributes still expected fail"""
        if isinstance(p, Choice):
            return mk_choice(self.close(p.left), self.close(p.right))
        if isinstance(p, Group):
            return mk_group(self.close(p.left), self.close(p.right))
        if isinstance(p, Interleave):
            return mk_interleave(self.close(p.left), self.close(p.right))
        if isinstance(p, OneOrMore):
            return mk_one_or_more(self.close(p.pattern))
        if isinstance(p, Attribute):
            return NOT_ALLOWED
        if isinstance(p, NamedRef) and self.has_attributes(p.name):
            return self.close(self.graph.lookup(p.name))
        return p

    # ------------------------------------------------------------------
    # text and children
    # ------------------------------------------------------------------

    def text_deriv(self, p: Pattern, text: str) -> Pattern:
        if isinstance(p, Choice):
            return mk_choice(self.text_deriv(p.left, text), self.text_deriv(p.right, text))
        if isinstance(p, Group):
            result = mk_group(self.text_deriv(p.left, text), p.right)
            if self.nullable(p.left):
                result = mk_choice(result, self.text_deriv(p.right, text))
            return result
        if isinstance(p, Interleave):
            return mk_choice(
                mk_interleave(self.text_deriv(p.left, text), p.right),
                mk_interleave(p.left, self.text_deriv(p.right, text)),
            )
        if isinstance(p, OneOrMore):
            return mk_group(self.text_deriv(p.pattern, text), mk_choice(p, EMPTY))
        if isinstance(p, Text):
            return p
        if isinstance(p, Data):
            return EMPTY if match_datatype(p.datatype, text) else NOT_ALLOWED
        if isinstance(p, ValueLiteral):
            if collapse_whitespace(text) == collapse_whitespace(p.literal):
                return EMPTY
            return NOT_ALLOWED
        if isinstance(p, NamedRef):
            return self.text_deriv(self.graph.lookup(p.name), text)
        return NOT_ALLOWED

    def names_match(self, p: Element, node: XmlElement) -> bool:
        return p.name == node.name and node.namespace == self.namespace

    def child_deriv(self, p: Pattern, node: XmlElement) -> Pattern:
        if isinstance(p, Choice):
            return mk_choice(self.child_deriv(p.left, node), self.child_deriv(p.right, node))
        if isinstance(p, Group):
            result = mk_group(self.child_deriv(p.left, node), p.right)
            if self.nullable(p.left):
                result = mk_choice(result, self.child_deriv(p.right, node))
            return result
        if isinstance(p, Interleave):
            return mk_choice(
                mk_interleave(self.child_deriv(p.left, node), p.right),
                mk_interleave(p.left, self.child_deriv(p.right, node)),
            )
        if isinstance(p, OneOrMore):
            return mk_group(self.child_deriv(p.pattern, node), mk_choice(p, EMPTY))
        if isinstance(p, Element):
            if self.names_match(p, node) and self.element_matches(p.content, node):
                return EMPTY
            return NOT_ALLOWED
        if isinstance(p, NamedRef):
            return self.child_deriv(self.graph.lookup(p.name), node)
        return NOT_ALLOWED

    def children_deriv(self, p: Pattern, children) -> Pattern:
        items = _merge_text(children)
        if not items:
            return mk_choice(p, self.text_deriv(p, ""))
        if len(items) == 1 and isinstance(items[0], str):
            text = items[0]
            residual = self.text_deriv(p, text)
            return mk_choice(p, residual) if is_whitespace(text) else residual
        for item in items:
            if isinstance(item, str):
                if is_whitespace(item):
                    continue
                p = self.text_deriv(p, item)
            else:
                p = self.child_deriv(p, item)
            if isinstance(p, NotAllowed):
                break
        return p

    def start_tag(self, p: Pattern, node: XmlElement) -> Pattern:
        for name, value in node.attributes:
            p = self.att_deriv(p, name, value)
            if isinstance(p, NotAllowed):
                return p
        return self.close(p)

    def element_matches(self, content: Pattern, node: XmlElement) -> bool:
        key = (content, id(node))
        if key not in self._element_memo:
            residual = self.children_deriv(self.start_tag(content, node), node.children)
            self._element_memo[key] = self.nullable(residual)
        return self._element_memo[key]

    # ------------------------------------------------------------------
    # diagnostics
    # ------------------------------------------------------------------

    def firsts(self, p: Pattern, rule: str, seen: Optional[set] = None) -> list[tuple[Element, str]]:
        """Element patterns that could match the next child, with their production"""
        seen = set() if seen is None else seen
        if isinstance(p, (Choice, Interleave)):
            return self.firsts(p.left, rule, seen) + self.firsts(p.right, rule, seen)
        if isinstance(p, Group):
            result = self.firsts(p.left, rule, seen)
            if self.nullable(p.left):
                result += self.firsts(p.right, rule, seen)
            return result
        if isinstance(p, OneOrMore):
            return self.firsts(p.pattern, rule, seen)
        if isinstance(p, Element):
            return [(p, rule)]
        if isinstance(p, NamedRef) and p.name not in seen:
            seen.add(p.name)
            return self.firsts(self.graph.lookup(p.name), p.name, seen)
        return []

    def attribute_owners(self, p: Pattern, rule: str, seen: Optional[set] = None) -> dict[str, str]:
        seen = set() if seen is None else seen
        if isinstance(p, Attribute):
            return {p.name: rule}
        if isinstance(p, (Choice, Group, Interleave)):
            owners = self.attribute_owners(p.right, rule, seen)
            owners.update(self.attribute_owners(p.left, rule, seen))
            return owners
        if isinstance(p, OneOrMore):
            return self.attribute_owners(p.pattern, rule, seen)
        if isinstance(p, NamedRef) and p.name not in seen and self.has_attributes(p.name):
            seen.add(p.name)
            return self.attribute_owners(self.graph.lookup(p.name), p.name, seen)
        return {}

    def required_attributes(self, p: Pattern, rule: str) -> list[tuple[str, str]]:
        if isinstance(p, Attribute):
            return [(p.name, rule)]
        if isinstance(p, (Group, Interleave)):
            return self.required_attributes(p.left, rule) + self.required_attributes(p.right, rule)
        if isinstance(p, Choice):
            if not isinstance(self.close(p.left), NotAllowed):
                return []
            if not isinstance(self.close(p.right), NotAllowed):
                return []
            return self.required_attributes(p.left, rule) + self.required_attributes(p.right, rule)
        if isinstance(p, OneOrMore):
            return self.required_attributes(p.pattern, rule)
        if isinstance(p, NamedRef) and self.has_attributes(p.name):
            return self.required_attributes(self.graph.lookup(p.name), p.name)
        return []

    def explain_child(
        self, p: Pattern, node: XmlElement, parent_path: str, path: str, rule: str
    ) -> Violation:
        """Why `node` cannot be consumed by the residual `p` of its parent"""
        candidates = [(e, r) for e, r in self.firsts(p, rule) if self.names_match(e, node)]
        found = [self.explain_element(e.content, node, path, r) for e, r in candidates]
        found = [v for v in found if v is not None]
        if found:
            return max(found, key=lambda v: v.path.count("/"))
        expected = sorted({e.name for e, _ in self.firsts(p, rule)})
        if candidates:
            message = f"element <{node.name}> not allowed at this position"
        elif expected:
            message = f"unexpected element <{node.name}>; expected one of {', '.join(expected)}"
        else:
            message = f"unexpected element <{node.name}>; no further elements allowed"
        return Violation(path=parent_path, rule=rule, message=message)

    def explain_element(
        self, content: Pattern, node: XmlElement, path: str, rule: str
    ) -> Optional[Violation]:
        """Deepest violation inside `node` against `content`, or None if it matches"""
        if self.element_matches(content, node):
            return None

        owners = self.attribute_owners(content, rule)
        p = content
        for name, value in node.attributes:
            residual = self.att_deriv(p, name, value)
            if isinstance(residual, NotAllowed):
                if name in owners:
                    return Violation(
                        path=path,
                        rule=owners[name],
                        message=f"invalid value {value!r} for attribute '{name}'",
                    )
                return Violation(path=path, rule=rule, message=f"attribute '{name}' not allowed")
            p = residual

        closed = self.close(p)
        if isinstance(closed, NotAllowed):
            missing = self.required_attributes(p, rule)
            if missing:
                names = ", ".join(f"'{n}'" for n, _ in missing)
                return Violation(
                    path=path,
                    rule=owners.get(missing[0][0], missing[0][1]),
                    message=f"missing required attribute {names}",
                )
            return Violation(path=path, rule=rule, message="attribute combination not allowed")
        p = closed

        items = _merge_text(node.children)
        single_ws = len(items) == 1 and isinstance(items[0], str) and is_whitespace(items[0])
        counters: dict[str, int] = {}
        for item in items:
            if isinstance(item, str):
                if is_whitespace(item) and (single_ws or len(items) > 1):
                    residual = mk_choice(p, self.text_deriv(p, item)) if single_ws else p
                else:
                    residual = self.text_deriv(p, item)
                if isinstance(residual, NotAllowed):
                    return Violation(
                        path=path, rule=rule, message=f"text {_snippet(item)!r} not allowed here"
                    )
            else:
                counters[item.name] = counters.get(item.name, 0) + 1
                child_path = f"{path}/{item.name}[{counters[item.name]}]"
                residual = self.child_deriv(p, item)
                if isinstance(residual, NotAllowed):
                    return self.explain_child(p, item, path, child_path, rule)
            p = residual

        if not items:
            p = mk_choice(p, self.text_deriv(p, ""))
        if not self.nullable(p):
            expected = sorted({e.name for e, _ in self.firsts(p, rule)})
            what = f"expected {', '.join(expected)}" if expected else "content missing"
            return Violation(path=path, rule=rule, message=f"incomplete content; {what}")
        return Violation(path=path, rule=rule, message="content does not match")


def nullable(p: Pattern, graph: PatternGraph) -> bool:
    """Whether p matches the empty sequence"""
    return _Matcher(graph, graph.namespace).nullable(p)


def validate(tree: XmlTree, graph: PatternGraph, lax: bool = False) -> ValidationReport:
    """
    Decide whether tree conforms to graph

    Strict mode requires the root namespace to equal the graph's namespace;
    lax mode also accepts a root without namespace.

    Raises:
        SchemaInternalError: If the graph has dangling references
    """
    root = tree.root
    root_path = f"/{root.name}"
    namespace = graph.namespace
    if root.namespace != namespace:
        if lax and root.namespace == "":
            namespace = ""
        else:
            found = root.namespace or "no namespace"
            logger.debug(f"Root namespace mismatch: {found}")
            return ValidationReport(
                valid=False,
                violations=(
                    Violation(
                        path=root_path,
                        rule="start",
                        message=f"root must be in namespace {graph.namespace!r}, found {found}",
                    ),
                ),
            )

    matcher = _Matcher(graph, namespace)
    residual = matcher.child_deriv(graph.start, root)
    if matcher.nullable(residual):
        logger.debug(f"Document <{root.name}> is valid")
        return ValidationReport(valid=True)

    violation = matcher.explain_child(graph.start, root, root_path, root_path, "start")
    logger.debug(f"Document <{root.name}> is invalid: {violation}")
    return ValidationReport(valid=False, violations=(violation,))
