"""ELA (Event Log Abstraction): the XML container for non-standard event
data produced by techniques whose output is no longer a plain event log.

Schema::

    <ela version="1.0">
      <origin>...</origin>
      <method>...</method>
      <desired-analyses><analysis>...</analysis>...</desired-analyses>
      <privacy-metadata>
        <operation seq="1" technique="..." created-at="...">
          <parameter name="..." value="..."/>
        </operation>
      </privacy-metadata>
      <data>...</data>
    </ela>

The only registered method is "connector", whose <data> payload is a
crypto header plus the shuffled directly-follows records.
"""

from __future__ import annotations

import base64
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .errors import MalformedXml, PayloadMismatch, UnknownMethod
from .metadata import AnonymizationOp, PrivacyMetadata
from .model import format_timestamp, parse_timestamp

ELA_VERSION = "1.0"
CONNECTOR_METHOD = "connector"


@dataclass(frozen=True)
class CryptoHeader:
    """Algorithm suite and KDF salt needed to reproduce the keys."""

    kdf_name: str
    kdf_salt: bytes
    aead_name: str
    version: str


@dataclass(frozen=True)
class ConnectorRecord:
    """One directly-follows relation: deterministic endpoint pseudonyms
    (hex) and the two AEAD-encrypted chaining connectors (base64)."""

    from_pseudonym: str
    to_pseudonym: str
    prev_connector: str
    next_connector: str


@dataclass(frozen=True)
class ConnectorPayload:
    header: CryptoHeader
    records: tuple[ConnectorRecord, ...] = ()


@dataclass(frozen=True)
class ELADocument:
    origin: str
    method: str
    desired_analyses: tuple[str, ...] = ()
    metadata: PrivacyMetadata = field(default_factory=PrivacyMetadata)
    payload: object = None

    def __post_init__(self):
        _check_payload(self.method, self.payload)


def _check_payload(method: str, payload: object) -> None:
    if method == CONNECTOR_METHOD:
        if not isinstance(payload, ConnectorPayload):
            raise PayloadMismatch(f"method {method!r} requires a connector payload with a crypto header")
    else:
        raise UnknownMethod(f"unknown ELA method {method!r}")


def write_ela(doc: ELADocument) -> bytes:
    """Serialize an ELA document; deterministic for identical inputs."""
    root = ET.Element("ela", version=ELA_VERSION)
    ET.SubElement(root, "origin").text = doc.origin
    ET.SubElement(root, "method").text = doc.method
    analyses = ET.SubElement(root, "desired-analyses")
    for analysis in doc.desired_analyses:
        ET.SubElement(analyses, "analysis").text = analysis
    meta_el = ET.SubElement(root, "privacy-metadata")
    for op in doc.metadata.operations:
        op_el = ET.SubElement(
            meta_el,
            "operation",
            seq=str(op.seq),
            technique=op.technique,
            attrib={"created-at": format_timestamp(op.created_at)},
        )
        for name in sorted(op.parameters):
            ET.SubElement(op_el, "parameter", name=name, value=op.parameters[name])
    data_el = ET.SubElement(root, "data")
    payload = doc.payload
    if isinstance(payload, ConnectorPayload):
        ET.SubElement(
            data_el,
            "crypto",
            kdf=payload.header.kdf_name,
            salt=base64.b64encode(payload.header.kdf_salt).decode("ascii"),
            aead=payload.header.aead_name,
            version=payload.header.version,
        )
        for record in payload.records:
            ET.SubElement(
                data_el,
                "record",
                attrib={
                    "from": record.from_pseudonym,
                    "to": record.to_pseudonym,
                    "cprev": record.prev_connector,
                    "cnext": record.next_connector,
                },
            )
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def _required(element: ET.Element, attr: str) -> str:
    value = element.get(attr)
    if value is None:
        raise MalformedXml(f"<{element.tag}> element lacks the {attr!r} attribute")
    return value


def _parse_operation(op_el: ET.Element) -> AnonymizationOp:
    try:
        seq = int(_required(op_el, "seq"))
    except ValueError as exc:
        raise MalformedXml(f"bad operation seq: {op_el.get('seq')!r}") from exc
    params = {}
    for param_el in op_el.findall("parameter"):
        params[_required(param_el, "name")] = param_el.get("value", "")
    return AnonymizationOp(
        seq=seq,
        technique=_required(op_el, "technique"),
        parameters=params,
        created_at=parse_timestamp(_required(op_el, "created-at")),
    )


def _parse_connector_payload(data_el: ET.Element) -> ConnectorPayload:
    crypto_el = data_el.find("crypto")
    if crypto_el is None:
        raise PayloadMismatch("connector payload lacks the crypto header")
    try:
        salt = base64.b64decode(_required(crypto_el, "salt"), validate=True)
    except Exception as exc:
        raise MalformedXml(f"bad crypto salt: {exc}") from exc
    header = CryptoHeader(
        kdf_name=_required(crypto_el, "kdf"),
        kdf_salt=salt,
        aead_name=_required(crypto_el, "aead"),
        version=_required(crypto_el, "version"),
    )
    records = tuple(
        ConnectorRecord(
            from_pseudonym=_required(el, "from"),
            to_pseudonym=_required(el, "to"),
            prev_connector=_required(el, "cprev"),
            next_connector=_required(el, "cnext"),
        )
        for el in data_el.findall("record")
    )
    return ConnectorPayload(header=header, records=records)


def parse_ela(document: bytes) -> ELADocument:
    """Parse ELA bytes back into a document; inverse of :func:`write_ela`."""
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise MalformedXml(f"not well-formed XML: {exc}") from exc
    if root.tag != "ela":
        raise MalformedXml(f"expected <ela> root element, got <{root.tag}>")
    method = (root.findtext("method") or "").strip()
    if method != CONNECTOR_METHOD:
        raise UnknownMethod(f"unknown ELA method {method!r}")
    data_el = root.find("data")
    if data_el is None:
        raise PayloadMismatch("ELA document lacks the <data> element")
    ops = sorted((_parse_operation(el) for el in root.iter("operation")), key=lambda op: op.seq)
    try:
        metadata = PrivacyMetadata(operations=tuple(ops))
    except ValueError as exc:
        raise MalformedXml(str(exc)) from exc
    return ELADocument(
        origin=(root.findtext("origin") or "").strip(),
        method=method,
        desired_analyses=tuple(
            (el.text or "").strip() for el in root.iter("analysis")
        ),
        metadata=metadata,
        payload=_parse_connector_payload(data_el),
    )
