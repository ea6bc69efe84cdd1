from typing import Any, ClassVar, Dict, Optional, Type

from pydantic.v1 import BaseModel as Pydantic1BaseModel


class BaseModel(Pydantic1BaseModel):
    class Config:
        arbitrary_types_allowed = True

    def __init__(self, **data):
        # only fields declared as typed models are dispatched on "type"
        for key, value in data.items():
            field = self.__class__.__fields__.get(key)
            if field is None or not _is_typed_model(field.type_):
                continue
            if isinstance(value, dict):
                data[key] = TypedModel.parse_obj(value)
            elif isinstance(value, list):
                data[key] = [TypedModel.parse_obj(v) if isinstance(v, dict) else v for v in value]
        super().__init__(**data)


def _is_typed_model(annotation: Any) -> bool:
    return isinstance(annotation, type) and issubclass(annotation, TypedModel)


class TypedModel(BaseModel):
    """A model tagged with a string `type`; subclasses register their tag on definition."""

    _by_tag: ClassVar[Dict[str, Type["TypedModel"]]] = {}
    _tag_of: ClassVar[Dict[str, str]] = {}

    def __init_subclass__(cls, type: Optional[str] = None):  # type: ignore
        if type is None:
            return
        TypedModel._by_tag[type] = cls
        TypedModel._tag_of[cls.__name__] = type

    @classmethod
    def get_cls(cls, tag: str) -> Type["TypedModel"]:
        try:
            return TypedModel._by_tag[tag]
        except KeyError:
            raise ValueError(f"unknown type tag {tag!r}") from None

    @classmethod
    def get_type(cls, cls_name: str) -> str:
        try:
            return TypedModel._tag_of[cls_name]
        except KeyError:
            raise ValueError(f"{cls_name} has no type tag") from None

    @classmethod
    def parse_obj(cls, obj):
        tag = obj.get("type")
        if tag is None:
            raise ValueError(f"type is required for {cls.__name__}")
        fields = {k: v for k, v in obj.items() if k != "type"}
        return cls.get_cls(tag)(**fields)

    def _iter(self, **kwargs):
        yield "type", self.type
        yield from super()._iter(**kwargs)

    @property
    def type(self) -> str:
        return self.get_type(self.__class__.__name__)
