'''
Created on 18 Oct 2026

@author: gltforge developers

Numerical tunables (tolerances, step sizes, iteration caps) are property
records registered by each module in a namespace named after the module.
The application side (the CLI) resolves overrides through AppConfig, in the
order: command line argument, environment variable, experiment config
dictionary, default.
'''
import contextlib
import inspect
import logging
from numbers import Integral, Real
import os
import re

from gltforge.errors import GltForgeError


NS_SEP = '.'
DEFAULT_NS = '__DEFAULT'
UNSET_STR = '(unset)'
VALID_NS_NAMES = r"([A-Za-z][_a-zA-Z0-9]*)(\.?[_A-Za-z][_a-zA-Z0-9]*)*$"
VALID_PROPERTY_NAMES = r"[A-Za-z][_a-zA-Z0-9]*$"


def ispropertynamevalid(name):
    '''
    Test if the given name is valid as a property name.
    '''
    return bool(name) and bool(re.match(VALID_PROPERTY_NAMES, name))


def isnsnamevalid(name):
    '''
    Test if the given name is valid as a namespace name.
    '''
    return bool(name) and (
        name == DEFAULT_NS or bool(re.match(VALID_NS_NAMES, name)))


class ConfigError(GltForgeError):
    '''
    Base of the configuration errors.  Subclasses only set the message
    template, which is applied to the offending name.
    '''
    template = '%r'

    def __init__(self, name):
        super().__init__(self.template % (name,))
        self.name = name


class ConfigPropertyValueNotSet(ConfigError):
    '''
    A value was read from a record with no value and no default.
    '''
    template = '%r value not set'


class ConfigPropertyBadName(ConfigError):
    template = 'Invalid property name: %r'


class ConfigPropertyNotFound(ConfigError):
    '''
    A fully qualified property name did not resolve, even walking up.
    '''
    template = 'Property not found: %r'


class ConfigPropertyInvalidValue(ConfigError):
    '''
    Raised by the stock validators below.
    '''
    template = 'Invalid value for %r'

    def __init__(self, name, value, expected):
        super().__init__(name)
        self.msg = '%s: %r (expected %s)' % (self.msg, value, expected)


class ConfigNamespaceDuplicateProperty(ConfigError):
    template = 'Duplicate property name: %r'


class ConfigNamespaceBadName(ConfigError):
    template = 'Invalid namespace name: %r'


class ConfigManagerDuplicateNamespace(ConfigError):
    template = 'Duplicate namespace: %r'


class ConfigManagerMissingNamespace(ConfigError):
    '''
    The namespace does not exist and walking up was suppressed.
    '''
    template = 'No namespace found: %r'


def positive(name, value):
    '''
    Validator: a strictly positive real number.
    '''
    if isinstance(value, Real) and not isinstance(value, bool) \
            and value > 0:
        return True
    raise ConfigPropertyInvalidValue(name, value, 'a positive number')


def positive_int(name, value):
    '''
    Validator: a strictly positive integer.
    '''
    if isinstance(value, Integral) and not isinstance(value, bool) \
            and value > 0:
        return True
    raise ConfigPropertyInvalidValue(name, value, 'a positive integer')


def non_negative_int(name, value):
    if isinstance(value, Integral) and not isinstance(value, bool) \
            and value >= 0:
        return True
    raise ConfigPropertyInvalidValue(name, value, 'a non-negative integer')


class ConfigPropertyRecord(object):
    '''
    Name and value property record.  An unset value is not the same as a
    value of None: reading an unset record raises ConfigPropertyValueNotSet.
    '''

    def __init__(self, name, **kwargs):
        log = logging.getLogger(__name__)
        log.debug("ConfigPropertyRecord(%r,%r)", name, kwargs)
        if not ispropertynamevalid(name):
            raise ConfigPropertyBadName(name)
        self._name = name
        if 'value' in kwargs:
            self._value = kwargs['value']
            self._hasvalue = True
        else:
            self._value = None
            self._hasvalue = False

    def __repr__(self):
        val = UNSET_STR
        if self._hasvalue:
            val = self._value
        return '%s(%s , %r)' % (self.__class__.__name__, self._name, val)

    @property
    def name(self):
        return self._name

    @property
    def hasvalue(self):
        return self._hasvalue

    @property
    def value(self):
        if not self._hasvalue:
            raise ConfigPropertyValueNotSet(self.name)
        return self._value

    @value.setter
    def value(self, value):
        self._value = value
        self._hasvalue = True


class ConfigPropertyRecordExt(ConfigPropertyRecord):
    '''
    Property record extended with an optional validation function and
    callback function.

    validate(name, value) runs before the value changes and raises on a bad
    value.  callback(name, value) runs after the change.  Return values of
    both are ignored.
    '''

    def __init__(self, name, **kwargs):
        log = logging.getLogger(__name__)
        log.debug("ConfigPropertyRecordExt(%r,%r)", name, kwargs)
        callback = kwargs.pop('callback', None)
        validate = kwargs.pop('validate', None)
        if validate and 'value' in kwargs:
            validate(name, kwargs['value'])
        super().__init__(name, **kwargs)
        self.callback = callback
        self.validate = validate

    def __repr__(self):
        val = UNSET_STR
        if self._hasvalue:
            val = self._value
        return '%s(%s , %r , callback=%r , validate=%r)' % (
            self.__class__.__name__, self.name, val, self.callback,
            self.validate)

    @ConfigPropertyRecord.value.setter
    def value(self, value):
        log = logging.getLogger(__name__)
        log.debug("ConfigPropertyRecordExt.value(%r <- %r)", self.name, value)
        if self.validate and callable(self.validate):
            self.validate(self.name, value)
        self._value = value
        self._hasvalue = True
        if self.callback and callable(self.callback):
            self.callback(self.name, self._value)


config_property_record_factory = ConfigPropertyRecordExt


class ConfigNamespace(object):
    '''
    Module side configuration namespace.  Records are attributes, so a
    module reads a tolerance as cfg.quad_rtol.value.
    '''

    def __init__(self, nspc, **kwargs):
        log = logging.getLogger(__name__)
        log.debug("ConfigNamespace(%r,%r)", nspc, kwargs)
        if not isnsnamevalid(nspc):
            raise ConfigNamespaceBadName(nspc)
        self.name = nspc
        if kwargs:
            self.add_properties(**kwargs)

    def __repr__(self):
        keys = sorted(self.__dict__)
        items = ("{}={!r}".format(k, self.__dict__[k]) for k in keys)
        return "{}({})".format(type(self).__name__, ", ".join(items))

    __str__ = __repr__

    def has_property(self, name):
        '''
        Does a property with the given name exist.
        '''
        if not ispropertynamevalid(name):
            raise ConfigPropertyBadName(name)
        return name in self.__dict__ and isinstance(
            self.__dict__[name], ConfigPropertyRecord)

    def property_names(self):
        return sorted(k for k, v in self.__dict__.items()
                      if isinstance(v, ConfigPropertyRecord))

    def add_property(self, name, **kwargs):
        '''
        Add a property record built by config_property_record_factory.
        '''
        log = logging.getLogger(__name__)
        log.debug("ConfigNamespace.add_property(%r,%r)", name, kwargs)
        if not ispropertynamevalid(name):
            raise ConfigPropertyBadName(name)
        if name in self.__dict__:
            raise ConfigNamespaceDuplicateProperty(name)
        self.__dict__[name] = config_property_record_factory(name, **kwargs)
        return getattr(self, name)

    def add_properties(self, **kwargs):
        '''
        Add multiple properties in one go.  A dict definition is passed as
        keyword arguments to the record, anything else becomes its value.
        All records are built before any is added, so one bad definition
        leaves the namespace unchanged.
        '''
        log = logging.getLogger(__name__)
        log.debug("ConfigNamespace.add_properties(%r)", kwargs)
        properties = kwargs.get('properties', kwargs)
        props = {}
        for name, defn in properties.items():
            if not ispropertynamevalid(name):
                raise ConfigPropertyBadName(name)
            if name in self.__dict__:
                raise ConfigNamespaceDuplicateProperty(name)
            if isinstance(defn, dict):
                props[name] = config_property_record_factory(name, **defn)
            else:
                props[name] = config_property_record_factory(name, value=defn)
        self.__dict__.update(props)
        return {name: getattr(self, name) for name in props}


configuration_namespace_factory = ConfigNamespace


class ConfigurationManager(object):
    '''
    Typically a singleton instance holding every module namespace of the
    running application.
    '''

    def __init__(self, **kwargs):
        log = logging.getLogger(__name__)
        log.debug("ConfigurationManager(%r)", kwargs)
        namespaces = kwargs.get('namespaces', kwargs)
        self.namespaces = {}
        for name, defn in namespaces.items():
            self.namespaces[name] = configuration_namespace_factory(
                name, **defn)
        if DEFAULT_NS not in self.namespaces:
            self.namespaces[DEFAULT_NS] = configuration_namespace_factory(
                DEFAULT_NS)

    def _parents(self, nspc):
        rtn = []
        if nspc in self.namespaces:
            rtn.append(nspc)
        i = nspc.rfind(NS_SEP)
        if i > -1:
            rtn.extend(self._parents(nspc[0:i]))
        return rtn

    def parent_namespaces(self, nspc):
        '''
        Namespaces form an a.b.c hierarchy.  Given a.b.c return the known
        namespaces among a.b.c, a.b, a followed by DEFAULT_NS.
        '''
        return [*self._parents(nspc), DEFAULT_NS]

    def has_namespace(self, nspc):
        if not isnsnamevalid(nspc):
            raise ConfigNamespaceBadName(nspc)
        return nspc in self.namespaces

    def add_namespace(self, nspc, **kwargs):
        log = logging.getLogger(__name__)
        log.debug("ConfigurationManager.add_namespace(%r, %r)", nspc, kwargs)
        if not isnsnamevalid(nspc):
            raise ConfigNamespaceBadName(nspc)
        if nspc in self.namespaces:
            raise ConfigManagerDuplicateNamespace(nspc)
        self.namespaces[nspc] = configuration_namespace_factory(
            nspc, **kwargs)
        return self.namespaces[nspc]

    def get_namespace(self, nspc, ornearest=True):
        '''
        Return the namespace with the given name, or with ornearest the
        closest existing parent (ending at the default namespace).
        '''
        if not isnsnamevalid(nspc):
            raise ConfigNamespaceBadName(nspc)
        if nspc in self.namespaces:
            return self.namespaces[nspc]
        if ornearest:
            return self.namespaces[self.parent_namespaces(nspc)[0]]
        raise ConfigManagerMissingNamespace(nspc)


configuration_manager_factory = ConfigurationManager

configuration_manager = None


def getConfigManager(**kwargs):
    '''
    Get the (singleton) configuration manager, creating it on first use.
    '''
    global configuration_manager
    if not configuration_manager:
        configuration_manager = configuration_manager_factory(**kwargs)
    return configuration_manager


def getConfig(nspc=None, ornearest=True, **kwargs):
    '''
    Get a namespace from the singleton manager.  With a name, return the
    existing namespace (adding any given properties) or create it.  Without
    a name, start from the calling module's __name__ and walk up.
    '''
    log = logging.getLogger(__name__)
    log.debug("getConfig(nspc=%r, ornearest=%r)", nspc, ornearest)
    mgr = getConfigManager()
    if nspc:
        if mgr.has_namespace(nspc):
            rtn = mgr.get_namespace(nspc)
            if kwargs:
                rtn.add_properties(**kwargs)
        else:
            rtn = mgr.add_namespace(nspc, **kwargs)
    else:
        nspc = inspect.getmodule(inspect.stack()[1][0]).__name__
        rtn = mgr.get_namespace(nspc, ornearest=ornearest)
    return rtn


def getConfigRecord(fqname, ornearest=True):
    '''
    Given package.module.name return the record `name` of namespace
    `package.module`, searching parent namespaces when ornearest is set.
    '''
    log = logging.getLogger(__name__)
    log.debug("getConfigRecord(fqname=%r, ornearest=%r)", fqname, ornearest)
    if not fqname:
        raise ConfigPropertyBadName(fqname)
    p = fqname.rfind(NS_SEP)
    if p < 0:
        raise ConfigPropertyNotFound(fqname)
    nspc, propname = fqname[0:p], fqname[p + 1:]
    if not isnsnamevalid(nspc):
        raise ConfigNamespaceBadName(nspc)
    if not ispropertynamevalid(propname):
        raise ConfigPropertyBadName(propname)

    mgr = getConfigManager()
    candidates = [nspc] if mgr.has_namespace(nspc) else []
    if ornearest:
        candidates.extend(mgr.parent_namespaces(nspc))
    for name in candidates:
        ns = mgr.get_namespace(name, ornearest=False)
        if ns.has_property(propname):
            return getattr(ns, propname)
    raise ConfigPropertyNotFound(fqname)


class AppConfig(object):
    '''
    Application side wrapper of one module property record.  resolve()
    sets the record from the highest priority source available:
        command line argument, environment variable, dictionary, default.
    Each source may have a format function taking (name, raw value) and
    returning the value in the form the module validator accepts.
    The dictionary source walks nested keys, so an experiment config
    loaded from json can carry overrides.
    '''

    def __init__(self, fqname, ornearest=True, **kwargs):
        self.record = getConfigRecord(fqname, ornearest)
        for kw in ['argalias', 'argformat', 'envformat',
                   'dictconfig', 'dictformat', 'default_value']:
            setattr(self, kw, kwargs.get(kw, None))
        for kw in ['envalias', 'dictalias']:
            setattr(self, kw, list(kwargs.get(kw, [])))
        self.has_default = 'default_value' in kwargs
        self.source = None

    def _argalias(self):
        if self.argalias is None:
            return False
        val = self.argalias() if callable(self.argalias) else self.argalias
        if self.argformat and callable(self.argformat):
            val = self.argformat(self.record.name, val)
        self.record.value = val
        return True

    def _envalias(self):
        for envalias in self.envalias:
            if envalias in os.environ:
                val = os.getenv(envalias)
                if self.envformat and callable(self.envformat):
                    val = self.envformat(self.record.name, val)
                self.record.value = val
                return True
        return False

    def _getdictentry(self, *keys):
        '''
        Returns (True, value) if the nested keys lead to a value, else
        (False, None).
        '''
        value = self.dictconfig
        for key in keys:
            try:
                value = value[key]
            except (KeyError, TypeError, IndexError):
                return (False, None,)
        return (True, value,)

    def _dictalias(self):
        if self.dictconfig is None:
            return False
        for keys in self.dictalias:
            if isinstance(keys, (list, tuple)):
                got, val = self._getdictentry(*keys)
            else:
                got, val = self._getdictentry(keys)
            if got:
                if self.dictformat and callable(self.dictformat):
                    val = self.dictformat(self.record.name, val)
                self.record.value = val
                return True
        return False

    def _default(self):
        if self.has_default:
            self.record.value = self.default_value
            return True
        return False

    def resolve(self):
        '''
        Resolve the sources in priority order and set the record.  The name
        of the winning source is kept in self.source.
        '''
        log = logging.getLogger(__name__)
        for source, res in [('arg', self._argalias), ('env', self._envalias),
                            ('dict', self._dictalias),
                            ('default', self._default)]:
            if res():
                self.source = source
                break
        log.debug("AppConfig.resolve(%r) = %r from %r", self.record.name,
                  self.record.value, self.source)
        return self.record.value

    @property
    def value(self):
        return self.record.value

    @value.setter
    def value(self, val):
        self.record.value = val


def apply_settings(settings):
    '''
    Push a {"package.module.property": value} mapping into the module
    namespaces (validators run as usual).  Returns the resolved values.
    '''
    rtn = {}
    for fqname in sorted(settings or {}):
        cfg = AppConfig(fqname, ornearest=False, dictconfig=settings,
                        dictalias=[[fqname]])
        rtn[fqname] = cfg.resolve()
    return rtn


@contextlib.contextmanager
def preserved(fqnames):
    '''
    Put the listed records back to their current values on exit.
    '''
    records = [getConfigRecord(name, ornearest=False) for name in fqnames]
    saved = [(record, record.value) for record in records]
    try:
        yield records
    finally:
        for record, value in saved:
            record.value = value
