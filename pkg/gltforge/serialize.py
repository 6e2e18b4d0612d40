'''
Created on 18 Oct 2026

@author: gltforge developers

JSON codecs for the value types and validation of experiment configs
against the schemas shipped in gltforge/schemas.  Complex numbers are
always [re, im] pairs.
'''
import functools
import json
import logging
import math
import os

from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match
import numpy as np

from gltforge import glt
from gltforge.algebra import CurveEq, MatPoly, PolyZ
from gltforge.curves import (
    ArcPath, Cycle, CycleSegment, Differential, LinePath, Loop, MonomialSum,
    RealStructure, ReducibleCurve, anti_invariant_part)
from gltforge.errors import GltForgeError


SCHEMA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                          'schemas')
EXPERIMENT_SCHEMA = 'experiment.schema.json'


class ConfigSchemaError(GltForgeError):
    '''
    A config that does not match its schema or cannot be decoded; pointer
    is the JSON pointer of the offending element.
    '''

    def __init__(self, pointer, message):
        super().__init__('%s: %s' % (pointer or '/', message))
        self.pointer = pointer


@functools.lru_cache(maxsize=None)
def load_schema(name=EXPERIMENT_SCHEMA):
    with open(os.path.join(SCHEMA_DIR, name)) as f:
        return json.load(f)


def _pointer(path):
    return '/' + '/'.join(str(p) for p in path)


def validate(obj, schema=None):
    '''
    Raise ConfigSchemaError for the most relevant validation error.
    '''
    schema = load_schema() if schema is None else schema
    error = best_match(Draft7Validator(schema).iter_errors(obj))
    if error is not None:
        raise ConfigSchemaError(_pointer(error.absolute_path), error.message)
    return obj


def load_config(path):
    '''
    Read and validate an experiment config file.
    '''
    log = logging.getLogger(__name__)
    try:
        with open(path) as f:
            obj = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigSchemaError('', 'invalid JSON in %s: %s' % (path, e))
    except OSError as e:
        raise ConfigSchemaError('', 'cannot read %s: %s' % (path, e))
    log.debug("load_config(%r): kind=%r", path,
              obj.get('kind') if isinstance(obj, dict) else None)
    return validate(obj)


def complex_from_json(pair):
    return complex(pair[0], pair[1])


def complex_to_json(value):
    value = complex(value)
    return [value.real, value.imag]


def _complex_array(obj):
    arr = np.asarray(obj, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def poly_from_json(obj):
    return PolyZ(_complex_array(obj['coeffs']), obj['deg_bound'])


def curve_from_json(obj):
    '''
    {"alphas": [[c_0, ...], ...]} for one component, or {"components":
    [...]} for a reducible curve.
    '''
    if 'components' in obj:
        return ReducibleCurve(tuple(curve_from_json(c)
                                    for c in obj['components']))
    return CurveEq(tuple(_complex_array(a) for a in obj['alphas']))


def path_from_json(obj):
    if obj['kind'] == 'segment':
        return LinePath(complex_from_json(obj['start']),
                        complex_from_json(obj['end']))
    return ArcPath(complex_from_json(obj['center']), float(obj['radius']),
                   float(obj['theta0']), float(obj['theta1']))


def rectangle_paths(xmin, xmax, ymin, ymax):
    '''
    Counterclockwise boundary of an axis-parallel rectangle.
    '''
    corners = [complex(xmin, ymin), complex(xmax, ymin),
               complex(xmax, ymax), complex(xmin, ymax)]
    return [LinePath(a, b) for a, b in zip(corners, corners[1:] + corners[:1])]


def _hint(obj):
    sheet = obj.get('sheet')
    eta = obj.get('eta')
    return sheet, None if eta is None else complex_from_json(eta)


def _loop_from_json(obj):
    if 'rectangle' in obj:
        sheet, eta = _hint(obj)
        component = obj.get('component', 0)
        segments = [CycleSegment(component, path)
                    for path in rectangle_paths(*obj['rectangle'])]
        segments[0] = CycleSegment(component, segments[0].path, sheet, eta)
    else:
        segments = []
        for seg in obj['segments']:
            sheet, eta = _hint(seg)
            segments.append(CycleSegment(seg.get('component', 0),
                                         path_from_json(seg['path']),
                                         sheet, eta))
    return Loop(tuple(segments), obj.get('sign', 1))


def cycle_from_json(obj, curve=None):
    '''
    Loops of segments (or rectangles).  With "antisymmetrize" the cycle is
    replaced by c - tau_* c, which needs a curve: the one given, else the
    "curve" of the cycle itself.
    '''
    c = Cycle(tuple(_loop_from_json(lp) for lp in obj['loops']),
              obj.get('closed', True))
    if obj.get('antisymmetrize'):
        if 'curve' in obj:
            curve = curve_from_json(obj['curve'])
        if curve is None:
            raise ConfigSchemaError('/antisymmetrize',
                                    'antisymmetrize needs a curve')
        c = anti_invariant_part(c, curve)
    return c


def monomials_from_json(obj):
    return MonomialSum(tuple(((i, j), complex_from_json(c))
                             for i, j, c in obj))


def differential_from_json(obj):
    if 'G' in obj:
        return Differential.meromorphic(monomials_from_json(obj['G']))
    return Differential.holomorphic(int(obj['r']), int(obj['s']))


def spec_from_json(obj):
    '''
    A built-in name, {"builtin": name, "params": {...}} or an explicit
    spec with closed terms and contour terms.
    '''
    try:
        if isinstance(obj, str):
            return glt.builtin_spec(obj)
        if 'builtin' in obj:
            params = dict(obj.get('params', {}))
            if 'cycle' in params:
                params['cycle'] = cycle_from_json(params['cycle'])
            return glt.builtin_spec(obj['builtin'], **params)
        degrees = tuple(obj.get('degrees', ()))
        if 'r' in obj:
            rs = RealStructure(tuple(obj['r']))
        else:
            rs = RealStructure.for_degrees(degrees)
        residues = tuple(
            glt.ResidueTerm(t['component'], monomials_from_json(t['H']),
                            t.get('weight', 1.0))
            for t in obj.get('residues', ()))
        cycles = tuple(glt.CycleTerm(cycle_from_json(t['cycle']),
                                     t.get('weight', 1.0))
                       for t in obj.get('cycles', ()))
        return glt.GltSpec(rs, tuple(obj.get('closed', ())), residues,
                           cycles, degrees, obj.get('domain'),
                           obj.get('name', 'custom'))
    except KeyError as e:
        raise ConfigSchemaError('/spec', 'missing parameter %s' % (e,))


def matpoly_from_json(obj):
    '''
    [A_0, A_1, ...], each an n x n array of [re, im] pairs.
    '''
    return MatPoly(_complex_array(obj))


def _key(k):
    if isinstance(k, tuple):
        return '_'.join(str(x) for x in k)
    return str(k)


def to_jsonable(value):
    '''
    Plain JSON structure for results: complex as [re, im], arrays as nested
    lists, NamedTuples as objects, NaN as null.
    '''
    if isinstance(value, (bool, np.bool_)) or value is None:
        return None if value is None else bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else value
    if isinstance(value, (complex, np.complexfloating)):
        return complex_to_json(value)
    if isinstance(value, str):
        return value
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value]
    if isinstance(value, PolyZ):
        return dict(coeffs=to_jsonable(value.coeffs),
                    deg_bound=value.deg_bound)
    if isinstance(value, CurveEq):
        return dict(alphas=[to_jsonable(a.coeffs) for a in value.alphas])
    if isinstance(value, MatPoly):
        return to_jsonable(value.mats)
    if hasattr(value, '_asdict'):
        return {k: to_jsonable(v) for k, v in value._asdict().items()}
    if isinstance(value, dict):
        return {_key(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError('cannot encode %r' % (type(value),))
