"""
Data Access Layer for cuspcount.

Converts domain values to JSON-compatible structures and writes results to disk:
JSON for everything, CSV / XLSX tables through pandas, SVG text and PNG bytes for
box diagrams. Output is byte-deterministic (sorted keys, fixed separators).
"""
import json
import logging
import math
import os
from enum import Enum
from fractions import Fraction

import numpy as np
import pandas as pd

# Local Code
from backend.backend_config import OUTPUT_FOLDER
from backend.exact_numbers import PerturbedRational
from backend.exceptions import DomainError, ParseError
from backend.spectrum import EllipsoidShape

logger = logging.getLogger(__name__)

TABLE_ENGINES = {'.csv': 'csv', '.xlsx': 'openpyxl'}


class DataAccess:
    def __init__(self, output_folder=OUTPUT_FOLDER):
        '''
        Initialize the DataAccess class. The output folder is created lazily on the
        first write that targets it.

        Args:
            output_folder (str): Default folder for relative output paths. Configured in backend_config.py.
        '''
        self.output_folder = output_folder

    # ------------------ JSON ------------------
    @staticmethod
    def to_jsonable(value):
        """
        Recursively converts a result to plain JSON types.
        Rationals become 'num/den' strings; domain objects use their to_json().
        """
        if value is None or isinstance(value, (bool, str)):
            return value
        if value is pd.NA:
            return None
        if isinstance(value, np.bool_):
            return bool(value)
        if isinstance(value, float):
            if math.isnan(value):
                return None
            raise DomainError(f"Refusing to serialize the inexact value {value!r}")
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, Fraction):
            return str(value)
        if isinstance(value, Enum):
            return value.value
        if isinstance(value, pd.DataFrame):
            return [DataAccess.to_jsonable(row) for row in value.to_dict(orient='records')]
        if isinstance(value, np.ndarray):
            return DataAccess.to_jsonable(value.tolist())
        if hasattr(value, 'to_json'):
            return DataAccess.to_jsonable(value.to_json())
        if isinstance(value, dict):
            return {str(key): DataAccess.to_jsonable(item) for key, item in value.items()}
        if isinstance(value, (list, tuple)):
            return [DataAccess.to_jsonable(item) for item in value]
        raise DomainError(f"Cannot serialize a value of type {type(value).__name__}")

    @staticmethod
    def dumps(value):
        return json.dumps(DataAccess.to_jsonable(value), sort_keys=True, separators=(',', ':'))

    @staticmethod
    def loads(text):
        try:
            return json.loads(text)
        except json.JSONDecodeError as error:
            raise ParseError(f"Invalid JSON: {error.msg}", text, error.pos)

    def read_json(self, path):
        with open(self._resolve(path), 'r', encoding='utf-8') as file:
            return self.loads(file.read())

    @staticmethod
    def load_shape(payload):
        """
        Rebuilds an EllipsoidShape from EllipsoidShape.to_json() output, or from a plain
        list of rationals / {'coeffs': [...]} objects.
        """
        factors = payload['factors'] if isinstance(payload, dict) else payload
        if not isinstance(factors, list):
            raise DomainError(f"Expected a list of factors, got {factors!r}")
        values = []
        for factor in factors:
            if isinstance(factor, dict):
                values.append(PerturbedRational.from_json(factor))
            else:
                values.append(PerturbedRational(factor))
        return EllipsoidShape(tuple(values))

    # ------------------ Tables ------------------
    @staticmethod
    def table_to_csv(table):
        return table.to_csv(index=False, lineterminator='\n')

    def write_table(self, table, path):
        """
        Writes a DataFrame as CSV, or as XLSX through openpyxl when the path ends in .xlsx.

        Returns:
            str: The absolute path written.
        """
        target = self._prepare(path)
        extension = os.path.splitext(target)[1].lower()
        if extension not in TABLE_ENGINES:
            raise DomainError(f"Unsupported table extension '{extension}', expected .csv or .xlsx")
        if TABLE_ENGINES[extension] == 'openpyxl':
            table.to_excel(target, index=False, engine='openpyxl')
        else:
            with open(target, 'w', encoding='utf-8', newline='') as file:
                file.write(self.table_to_csv(table))
        logger.info(f"Wrote {len(table)} rows to {target}")
        return target

    # ------------------ Raw files ------------------
    def write_text(self, text, path):
        target = self._prepare(path)
        with open(target, 'w', encoding='utf-8', newline='') as file:
            file.write(text)
        logger.info(f"Wrote {len(text)} characters to {target}")
        return target

    def write_bytes(self, payload, path):
        target = self._prepare(path)
        with open(target, 'wb') as file:
            file.write(payload)
        logger.info(f"Wrote {len(payload)} bytes to {target}")
        return target

    def write_json(self, value, path):
        return self.write_text(self.dumps(value) + '\n', path)

    def _resolve(self, path):
        if os.path.isabs(path):
            return path
        return os.path.join(self.output_folder, path)

    def _prepare(self, path):
        target = self._resolve(path)
        folder = os.path.dirname(target)
        if folder:
            os.makedirs(folder, exist_ok=True)
        return target


if __name__ == '__main__':
    # Local Tests
    da = DataAccess()
    print(da.dumps({'path': (5, 4), 'bound': Fraction(44, 22)}))
    print(da.load_shape(['2', {'coeffs': ['3', '1']}]))
