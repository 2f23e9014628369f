"""
分支来源标签

标签由 ';' 分隔的 key=value 字段组成，例如 "source=two-pair;bitflip=two;lost=2"。
"""

from typing import Dict


def join_tags(*parts: str) -> str:
    return ";".join(p for p in parts if p)


def tag_fields(tag: str) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    for part in tag.split(";"):
        if not part:
            continue
        key, _, value = part.partition("=")
        fields[key] = value
    return fields
