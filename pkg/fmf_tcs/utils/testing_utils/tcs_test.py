import numpy as np

class TCSTest():

    def prep(self, seed:int = 0, **constant_overrides):
        """
        preprocessing for tests: default physical constants (with overrides)
        and a seeded random generator.
        """
        from fmf_tcs.src.phy.constants import PhysicalConstants
        self.k = PhysicalConstants(**constant_overrides)
        self.rng = np.random.default_rng(seed)

    def run_tests(
            self,
            compare_values = None,
            program = None,
            verify_gradients = False,
            verify_convexity = False,
            gradient_tolerance = 1e-5,
            convexity_tolerance = 1e-9,
            points = 20,
            pairs = 500,
        ):
        """
        Compares every TestingPair and optionally checks the analytic
        gradients and the convexity of a program by sampling.
        """
        if compare_values is None:
            compare_values = []

        for ind, testing_pair in enumerate(compare_values):
            testing_pair.compare(ind+1)

        if verify_gradients or verify_convexity:
            if program is None:
                raise ValueError(get_testing_error_string("a program is needed to verify gradients or convexity"))
        if verify_gradients:
            from fmf_tcs.src.oracle.numerics import finite_diff_check
            error = finite_diff_check(program, points=points, seed=0)
            assert error < gradient_tolerance, f"gradient check failed: max relative error {error:.3e}"
        if verify_convexity:
            from fmf_tcs.src.oracle.numerics import convexity_sample
            violation = convexity_sample(program, pairs=pairs, seed=0)
            assert violation <= convexity_tolerance, f"convexity check failed: midpoint violation {violation:.3e}"


def get_testing_error_string(error_string):
    return f"Test implementation error: {error_string}"


class TestingPair():

    def __init__(self,
            value,
            real_value,
            decimal = 11,
            tag:str = None,
            relative:bool = False,
        ):
        """
        Class to compare a computed value with a reference value for unit tests.

        Args:
            value: computed scalar or array
            real_value: reference scalar or array
            decimal (int): decimal places for tolerance
            tag (str): tag for the pair
            relative (bool): compare value/real_value against one
        """
        value = np.asarray(value, dtype=float)
        real_value = np.asarray(real_value, dtype=float)
        if relative and np.any(real_value == 0.0):
            raise ValueError(get_testing_error_string(f"relative comparison against zero for {tag}"))

        self.value = value
        self.real_value = real_value
        self.decimal = decimal
        self.relative = relative
        self.tag = tag if tag is not None else 'unnamed'

    def compare(self, ind):
        """
        Tests the shapes and values of the computed value and the real value.
        """
        if self.value.shape != self.real_value.shape:
            raise AssertionError(self.get_assertion_error_string(ind, 'shape'))

        from numpy.testing import assert_array_almost_equal
        if self.relative:
            actual = self.value/self.real_value
            desired = np.ones_like(self.real_value)
        else:
            actual = self.value
            desired = self.real_value
        assert_array_almost_equal(
            actual,
            desired,
            decimal = self.decimal,
            err_msg = self.get_assertion_error_string(ind, 'value')
        )

    def get_assertion_error_string(self, ind, error_type):
        error_str = "\n"
        error_str += f"{error_type} assertion error in\n"
        error_str += f"Value pair:       \"{self.tag}\"\n"
        error_str += f"Index in list:    {ind}\n"

        if error_type == 'value':
            error_str += f"\nComputed value:   \n{self.value}\n\n"
            error_str += f"Real value:       \n{self.real_value}\n"
        elif error_type == 'shape':
            error_str += f"\nComputed shape:   {self.value.shape}\n"
            error_str += f"Real shape:       {self.real_value.shape}\n"
        return error_str
