"""Typed, validated properties declared on container classes.

Each property knows how to check a value, write it as one line of text and read
it back; the INI experiment configuration is a set of such containers.
"""
from qfiso.galerkin import GridSpec


class BaseProperty:
    """Descriptor holding a validated value in the owning container's _values"""
    def __init__(self, *, type_=None, min_value=None, max_value=None, default=None):
        self.name = None
        self.type = type_
        self.min_value = min_value
        self.max_value = max_value
        self.default = default

    def __set_name__(self, owner, name):
        self.name = name

    def __get__(self, instance, owner):
        if instance is None:
            return self
        return instance._values.get(self.name)

    def __set__(self, instance, value):
        instance._values[self.name] = None if value is None else self.validate(value)

    def _check_type(self, value):
        if self.type is not None and not isinstance(value, self.type):
            raise TypeError(f"'{self.name}' must be of type {self.type.__name__},"
                            f" got {type(value).__name__}")

    def _check_bounds(self, value):
        if self.min_value is not None and value < self.min_value:
            raise ValueError(f"'{self.name}' must be >= {self.min_value}, got {value}")
        if self.max_value is not None and value > self.max_value:
            raise ValueError(f"'{self.name}' must be <= {self.max_value}, got {value}")

    def validate(self, value):
        """Checked (possibly converted) value; TypeError or ValueError otherwise"""
        self._check_type(value)
        self._check_bounds(value)
        return value

    def render(self, value) -> str:
        """One-line text form ('' when unset)"""
        return '' if value is None else self._render(value)

    def _render(self, value) -> str:
        return str(value)

    def parse(self, text: str):
        """Value from its text form; blank text restores the default"""
        text = text.strip()
        return self.default if not text else self.validate(self._parse(text))

    def _parse(self, text: str):
        return self.type(text) if self.type else text


class IntProperty(BaseProperty):
    """Integer; bools are refused"""
    def __init__(self, **kwargs):
        super().__init__(type_=int, **kwargs)

    def _check_type(self, value):
        if isinstance(value, bool):
            raise TypeError(f"'{self.name}' must be of type int, got bool")
        super()._check_type(value)


class FloatProperty(BaseProperty):
    """Float; ints are accepted and converted"""
    def __init__(self, **kwargs):
        super().__init__(type_=float, **kwargs)

    def validate(self, value):
        if isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        return super().validate(value)

    def _render(self, value) -> str:
        return repr(float(value))


class BoolProperty(BaseProperty):
    """Bool, written true/false and read the way configparser reads booleans"""
    WORDS = {'true': True, 'yes': True, 'on': True, '1': True,
             'false': False, 'no': False, 'off': False, '0': False}

    def __init__(self, **kwargs):
        super().__init__(type_=bool, **kwargs)

    def _render(self, value) -> str:
        return 'true' if value else 'false'

    def _parse(self, text: str):
        try:
            return self.WORDS[text.lower()]
        except KeyError as ex:
            raise ValueError(f"'{self.name}' must be a boolean, got '{text}'") from ex


class StringProperty(BaseProperty):
    """String, optionally one of allowed_values; blank text is a valid value"""
    def __init__(self, *, allowed_values=None, **kwargs):
        super().__init__(type_=str, **kwargs)
        self.allowed_values = allowed_values

    def parse(self, text: str):
        return self.validate(text.strip())

    def _check_bounds(self, value):
        if self.allowed_values is not None and value not in self.allowed_values:
            raise ValueError(f"'{self.name}' must be one of {self.allowed_values}, got '{value}'")


class ListProperty(BaseProperty):
    """Comma-separated tuple whose items are checked by an item property"""
    def __init__(self, item: BaseProperty, *, min_length=1, **kwargs):
        super().__init__(type_=tuple, **kwargs)
        self.item = item
        self.min_length = min_length

    def __set_name__(self, owner, name):
        super().__set_name__(owner, name)
        self.item.name = f'{name}[]'

    def validate(self, value):
        if isinstance(value, (str, bytes)) or not hasattr(value, '__iter__'):
            raise TypeError(f"'{self.name}' must be a sequence, got {type(value).__name__}")
        items = tuple(self.item.validate(v) for v in value)
        if len(items) < self.min_length:
            raise ValueError(f"'{self.name}' needs at least {self.min_length} items")
        return items

    def _render(self, value) -> str:
        return ', '.join(self.item.render(v) for v in value)

    def _parse(self, text: str):
        parts = [part.strip() for part in text.split(',')]
        if not all(parts):
            raise ValueError(f"'{self.name}' has an empty item in '{text}'")
        return [self.item.parse(part) for part in parts]


class IntListProperty(ListProperty):
    """Integers, each within [min_value, max_value]"""
    def __init__(self, *, min_value=None, max_value=None, **kwargs):
        super().__init__(IntProperty(min_value=min_value, max_value=max_value), **kwargs)


class FloatListProperty(ListProperty):
    """Floats, each within [min_value, max_value]"""
    def __init__(self, *, min_value=None, max_value=None, **kwargs):
        super().__init__(FloatProperty(min_value=min_value, max_value=max_value), **kwargs)


class GridProperty(BaseProperty):
    """Momentum grid written as M:P"""
    def __init__(self, **kwargs):
        super().__init__(type_=GridSpec, **kwargs)

    def validate(self, value):
        return super().validate(GridSpec.parse(value) if isinstance(value, str) else value)

    def _parse(self, text: str):
        return GridSpec.parse(text)


class GridListProperty(ListProperty):
    """Momentum grids, e.g. '128:32, 256:64'"""
    def __init__(self, **kwargs):
        super().__init__(GridProperty(), **kwargs)


class PropertyMeta(type):
    """Collects the declared properties of a class and its bases, in declaration order.

    Redeclaring an inherited property is a TypeError.
    """
    def __new__(mcs, name, bases, namespace):
        declared = {}
        for base in bases:
            declared.update(getattr(base, '_declared_properties', {}))
        own = {key: value for key, value in namespace.items() if isinstance(value, BaseProperty)}
        clashes = sorted(set(own) & set(declared))
        if clashes:
            raise TypeError(f"Class '{name}' redeclares inherited properties {clashes}")
        cls = super().__new__(mcs, name, bases, namespace)
        cls._declared_properties = {**declared, **own}
        return cls


class PropertyContainer(metaclass=PropertyMeta):
    """A set of properties with defaults; subclass and declare properties as class attributes"""
    _declared_properties = {}

    def __init__(self, **kwargs):
        unknown = set(kwargs) - set(self._declared_properties)
        if unknown:
            raise AttributeError(f"Unknown properties {sorted(unknown)}")
        self._values = {}
        for name, prop in self._declared_properties.items():
            setattr(self, name, kwargs.get(name, prop.default))

    def _property(self, name) -> BaseProperty:
        try:
            return self._declared_properties[name]
        except KeyError as ex:
            raise AttributeError(f"Unknown property '{name}'") from ex

    def get(self, name):
        """Current value of a property"""
        self._property(name)
        return getattr(self, name)

    def set(self, name, value):
        """Validate and set a property"""
        self._property(name)
        setattr(self, name, value)

    def render(self, name) -> str:
        """Text form of one property"""
        return self._property(name).render(self.get(name))

    def parse(self, name, text: str):
        """Set one property from its text form"""
        self._values[name] = self._property(name).parse(text)

    @classmethod
    def property_names(cls):
        """Names in declaration order"""
        return list(cls._declared_properties)

    def as_dict(self):
        """Current values by name"""
        return dict(self._values)

    def __eq__(self, other):
        return type(self) is type(other) and self._values == other._values

    def __getitem__(self, key):
        return self.get(key)

    def __setitem__(self, key, value):
        self.set(key, value)

    def __repr__(self):
        values = ', '.join(f'{k}={v!r}' for k, v in self._values.items())
        return f'{type(self).__name__}({values})'
