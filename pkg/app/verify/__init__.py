from .suite import SUITES, VerificationSuite, sampled_check, within_sigma

__all__ = ['SUITES', 'VerificationSuite', 'sampled_check', 'within_sigma']
