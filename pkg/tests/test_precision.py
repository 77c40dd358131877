"""
Tests para PrecisionContext y la selección de precisión desde la CLI.
"""

import unittest

import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.run_spec import precision_from_flags
from src.utils.errors import DomainError, UsageError
from src.utils.precision import FloatArithmetic, PrecisionContext


class TestPrecisionContext(unittest.TestCase):
    """Tests para la configuración de precisión."""

    def test_standard_defaults(self):
        ctx = PrecisionContext.standard()
        self.assertEqual(ctx.mode, "standard")
        self.assertEqual(ctx.digits, 15)
        self.assertFalse(ctx.is_extended)
        self.assertIsInstance(ctx.arithmetic(), FloatArithmetic)

    def test_extended_arithmetic_has_requested_digits(self):
        ctx = PrecisionContext.extended(48)
        ar = ctx.arithmetic()
        self.assertEqual(ar.dps, 48)
        self.assertTrue(ctx.is_extended)

    def test_arithmetics_are_independent(self):
        """Cada llamada devuelve un contexto mpmath propio."""
        first = PrecisionContext.extended(20).arithmetic()
        second = PrecisionContext.extended(60).arithmetic()
        self.assertEqual(first.dps, 20)
        self.assertEqual(second.dps, 60)

    def test_invalid_values(self):
        with self.assertRaises(DomainError):
            PrecisionContext(mode="quad")
        with self.assertRaises(DomainError):
            PrecisionContext(mode="extended", digits=10)
        with self.assertRaises(DomainError):
            PrecisionContext(tolerance=1e-5)
        with self.assertRaises(DomainError):
            PrecisionContext(tolerance=0.0)

    def test_escalated(self):
        ctx = PrecisionContext.standard().escalated()
        self.assertTrue(ctx.is_extended)
        self.assertEqual(ctx.digits, 32)
        self.assertIs(ctx.escalated(), ctx)

    def test_with_digits(self):
        ctx = PrecisionContext.extended(32).with_digits(64)
        self.assertEqual(ctx.digits, 64)
        self.assertGreaterEqual(ctx.max_digits, 64)

    def test_from_env(self):
        self.assertFalse(PrecisionContext.from_env({}).is_extended)
        ctx = PrecisionContext.from_env({"WSHART_PRECISION": "extended", "WSHART_DIGITS": "40"})
        self.assertTrue(ctx.is_extended)
        self.assertEqual(ctx.digits, 40)
        with self.assertRaises(DomainError):
            PrecisionContext.from_env({"WSHART_PRECISION": "triple"})

    def test_describe(self):
        self.assertEqual(PrecisionContext.extended(32).describe(),
                         {"mode": "extended", "digits": 32, "tolerance": 1e-15})


class TestPrecisionFromFlags(unittest.TestCase):
    """Tests para la prioridad opciones > entorno."""

    def test_default_is_standard(self):
        self.assertFalse(precision_from_flags(None, None, {}).is_extended)

    def test_environment_is_used(self):
        ctx = precision_from_flags(None, None, {"WSHART_PRECISION": "extended"})
        self.assertTrue(ctx.is_extended)
        self.assertEqual(ctx.digits, 32)

    def test_flags_override_environment(self):
        ctx = precision_from_flags("standard", None, {"WSHART_PRECISION": "extended"})
        self.assertFalse(ctx.is_extended)
        ctx = precision_from_flags("extended", 50, {})
        self.assertEqual(ctx.digits, 50)

    def test_digits_require_extended(self):
        with self.assertRaises(UsageError):
            precision_from_flags("standard", 40, {})

    def test_invalid_environment_is_usage_error(self):
        with self.assertRaises(UsageError):
            precision_from_flags(None, None, {"WSHART_PRECISION": "bogus"})

    def test_invalid_digits_is_usage_error(self):
        with self.assertRaises(UsageError):
            precision_from_flags("extended", 5, {})


if __name__ == '__main__':
    unittest.main()
