"""XES event log parsing and serialization.

Supports the pragmatic subset used throughout the toolkit: log/trace/event
elements with string, date, int, float and boolean attributes. Nested
attributes are flattened into dotted keys. Gzip-compressed documents are
decompressed transparently. The privacy operation chain is embedded as a
log-level container attribute with key ``privacy:anonymizations`` so that
outputs stay readable by metadata-unaware XES tools.
"""

from __future__ import annotations

import gzip
import io
import xml.etree.ElementTree as ET
from datetime import datetime
from typing import Union

from .errors import (
    DuplicateCaseId,
    MalformedXml,
    MissingActivity,
    MissingTimestamp,
)
from .metadata import AnonymizationOp, PrivacyMetadata
from .model import (
    AttributeValue,
    Event,
    EventLog,
    Trace,
    format_timestamp,
    parse_timestamp,
    sort_events,
)

ACTIVITY_KEY = "concept:name"
CASE_ID_KEY = "concept:name"
TIMESTAMP_KEY = "time:timestamp"
RESOURCE_KEY = "org:resource"
METADATA_KEY = "privacy:anonymizations"

_GZIP_MAGIC = b"\x1f\x8b"

# XES attribute elements handled by the subset; <id> values are kept as
# plain strings.
_VALUE_TAGS = {"string", "date", "int", "float", "boolean", "id"}
_SKIPPED_TAGS = {"extension", "classifier", "global"}


def _strip_ns(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _to_bytes(document: Union[bytes, bytearray, io.IOBase]) -> bytes:
    if isinstance(document, (bytes, bytearray)):
        data = bytes(document)
    else:
        data = document.read()
        if isinstance(data, str):
            data = data.encode("utf-8")
    if data[:2] == _GZIP_MAGIC:
        try:
            data = gzip.decompress(data)
        except OSError as exc:
            raise MalformedXml(f"bad gzip stream: {exc}") from exc
    return data


def _parse_value(tag: str, raw: str, key: str) -> AttributeValue:
    try:
        if tag == "date":
            return parse_timestamp(raw)
        if tag == "int":
            return int(raw)
        if tag == "float":
            return float(raw)
        if tag == "boolean":
            return raw.strip().lower() == "true"
    except ValueError as exc:
        raise MalformedXml(f"bad {tag} value for attribute {key!r}: {raw!r}") from exc
    return raw


def _collect_attributes(element: ET.Element, into: dict, prefix: str = "") -> None:
    """Flatten the attribute elements below ``element`` into ``into``,
    joining nested keys with dots."""
    for child in element:
        tag = _strip_ns(child.tag)
        if tag not in _VALUE_TAGS and tag != "container" and tag != "list":
            continue
        key = child.get("key", "")
        if not key:
            continue
        full_key = f"{prefix}{key}"
        if tag in _VALUE_TAGS:
            into[full_key] = _parse_value(tag, child.get("value", ""), full_key)
        _collect_attributes(child, into, prefix=f"{full_key}.")


def _parse_metadata(container: ET.Element) -> PrivacyMetadata:
    ops = []
    for op_el in container:
        fields: dict[str, AttributeValue] = {}
        _collect_attributes(op_el, fields)
        seq = fields.get("privacy:seq")
        technique = fields.get("privacy:technique")
        stamp = fields.get("privacy:timestamp")
        if not isinstance(seq, int) or not isinstance(technique, str) or not isinstance(stamp, datetime):
            raise MalformedXml("privacy operation element lacks seq/technique/timestamp")
        params = {
            key.split("privacy:param:", 1)[1]: str(value)
            for key, value in fields.items()
            if key.startswith("privacy:param:")
        }
        ops.append(AnonymizationOp(seq=seq, technique=technique, parameters=params, created_at=stamp))
    ops.sort(key=lambda op: op.seq)
    try:
        return PrivacyMetadata(operations=tuple(ops))
    except ValueError as exc:
        raise MalformedXml(str(exc)) from exc


def _parse_event(event_el: ET.Element, case_id: str) -> Event:
    attrs: dict[str, AttributeValue] = {}
    _collect_attributes(event_el, attrs)
    activity = attrs.pop(ACTIVITY_KEY, None)
    if not isinstance(activity, str) or not activity:
        raise MissingActivity(f"event without activity in trace {case_id!r}")
    timestamp = attrs.pop(TIMESTAMP_KEY, None)
    if not isinstance(timestamp, datetime):
        raise MissingTimestamp(f"event {activity!r} in trace {case_id!r} has no timestamp")
    resource = attrs.pop(RESOURCE_KEY, None)
    if resource is not None and not isinstance(resource, str):
        resource = str(resource)
    return Event(activity=activity, timestamp=timestamp, resource=resource, extras=attrs)


def parse_xes(document: Union[bytes, bytearray, io.IOBase], name: str = "") -> EventLog:
    """Parse an XES document (optionally gzipped) into an :class:`EventLog`.

    ``name`` is used when the document carries no log-level concept:name,
    typically the stem of the file it was read from.
    """
    data = _to_bytes(document)
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXml(f"not well-formed XML: {exc}") from exc
    if _strip_ns(root.tag) != "log":
        raise MalformedXml(f"expected <log> root element, got <{_strip_ns(root.tag)}>")

    global_attrs: dict[str, AttributeValue] = {}
    metadata = PrivacyMetadata()
    traces: list[Trace] = []
    seen_case_ids: set[str] = set()

    for child in root:
        tag = _strip_ns(child.tag)
        if tag in _SKIPPED_TAGS:
            continue
        if tag != "trace":
            if child.get("key") == METADATA_KEY:
                metadata = _parse_metadata(child)
            else:
                _collect_one(child, global_attrs)
        else:
            trace_attrs: dict[str, AttributeValue] = {}
            events = []
            for item in child:
                if _strip_ns(item.tag) == "event":
                    events.append(item)
                else:
                    _collect_one(item, trace_attrs)
            case_id = trace_attrs.pop(CASE_ID_KEY, None)
            if not isinstance(case_id, str) or not case_id:
                case_id = f"case_{len(traces) + 1}"
            if case_id in seen_case_ids:
                raise DuplicateCaseId(f"case id {case_id!r} occurs more than once")
            seen_case_ids.add(case_id)
            parsed = tuple(_parse_event(e, case_id) for e in events)
            traces.append(Trace(case_id=case_id, events=sort_events(parsed), attributes=trace_attrs))

    log_name = global_attrs.pop(ACTIVITY_KEY, None)
    if not isinstance(log_name, str) or not log_name:
        log_name = name
    return EventLog(name=log_name, traces=tuple(traces), global_attributes=global_attrs, metadata=metadata)


def _collect_one(element: ET.Element, into: dict) -> None:
    tag = _strip_ns(element.tag)
    if tag not in _VALUE_TAGS and tag not in ("container", "list"):
        return
    key = element.get("key", "")
    if not key:
        return
    if tag in _VALUE_TAGS:
        into[key] = _parse_value(tag, element.get("value", ""), key)
    _collect_attributes(element, into, prefix=f"{key}.")


# ---------------------------------------------------------------------------
# serialization

_EXTENSIONS = (
    ("Concept", "concept", "http://www.xes-standard.org/concept.xesext"),
    ("Time", "time", "http://www.xes-standard.org/time.xesext"),
    ("Organizational", "org", "http://www.xes-standard.org/org.xesext"),
)


def _value_element(parent: ET.Element, key: str, value: AttributeValue) -> ET.Element:
    if isinstance(value, bool):
        return ET.SubElement(parent, "boolean", key=key, value="true" if value else "false")
    if isinstance(value, int):
        return ET.SubElement(parent, "int", key=key, value=str(value))
    if isinstance(value, float):
        return ET.SubElement(parent, "float", key=key, value=repr(value))
    if isinstance(value, datetime):
        return ET.SubElement(parent, "date", key=key, value=format_timestamp(value))
    return ET.SubElement(parent, "string", key=key, value=str(value))


def _metadata_element(parent: ET.Element, metadata: PrivacyMetadata) -> None:
    container = ET.SubElement(parent, "container", key=METADATA_KEY)
    for op in metadata.operations:
        op_el = ET.SubElement(container, "container", key="privacy:op")
        _value_element(op_el, "privacy:seq", op.seq)
        _value_element(op_el, "privacy:technique", op.technique)
        _value_element(op_el, "privacy:timestamp", op.created_at)
        for pname in sorted(op.parameters):
            _value_element(op_el, f"privacy:param:{pname}", op.parameters[pname])


def write_xes(log: EventLog) -> bytes:
    """Serialize to XES bytes; identical inputs yield identical bytes."""
    root = ET.Element("log", attrib={"xes.version": "1.0", "xes.features": "nested-attributes"})
    for ext_name, prefix, uri in _EXTENSIONS:
        ET.SubElement(root, "extension", name=ext_name, prefix=prefix, uri=uri)
    if log.name:
        _value_element(root, ACTIVITY_KEY, log.name)
    for key, value in log.global_attributes.items():
        _value_element(root, key, value)
    if log.metadata.operations:
        _metadata_element(root, log.metadata)
    for trace in log.traces:
        trace_el = ET.SubElement(root, "trace")
        _value_element(trace_el, CASE_ID_KEY, trace.case_id)
        for key, value in trace.attributes.items():
            _value_element(trace_el, key, value)
        for event in trace.events:
            event_el = ET.SubElement(trace_el, "event")
            _value_element(event_el, ACTIVITY_KEY, event.activity)
            _value_element(event_el, TIMESTAMP_KEY, event.timestamp)
            if event.resource is not None:
                _value_element(event_el, RESOURCE_KEY, event.resource)
            for key, value in event.extras.items():
                _value_element(event_el, key, value)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)
