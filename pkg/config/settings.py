# config/settings.py
import os
import sys

# Try to load dotenv, but continue without it if not available
try:
    from dotenv import load_dotenv
    load_dotenv()
    DOTENV_AVAILABLE = True
except ImportError:
    DOTENV_AVAILABLE = False
    print("Warning: python-dotenv not installed. Using system environment variables only.", file=sys.stderr)

FD_SCHEMES = ('central2', 'central4')

class Settings:
    # Logging settings
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()
    LOG_DIR = os.getenv('LOG_DIR', 'logs')
    LOG_TO_CONSOLE = os.getenv('LOG_TO_CONSOLE', 'true').lower() == 'true'

    # Output settings
    OUTPUT_DIR = os.getenv('OUTPUT_DIR', 'output')

    # Parallelism cap for grid sampling
    RIGIDLAB_THREADS = int(os.getenv('RIGIDLAB_THREADS', '1'))

    # Solver defaults
    NEWTON_TOL = float(os.getenv('NEWTON_TOL', '1e-13'))
    SHOCK_TOL = float(os.getenv('SHOCK_TOL', '1e-10'))
    MAX_NEWTON_ITERS = int(os.getenv('MAX_NEWTON_ITERS', '40'))
    CONTINUATION_STEPS = int(os.getenv('CONTINUATION_STEPS', '64'))

    # Finite-difference defaults
    FD_STEP = float(os.getenv('FD_STEP', '1e-5'))
    FD_SCHEME = os.getenv('FD_SCHEME', 'central2').lower()

    @classmethod
    def validate_settings(cls):
        """Validate numeric settings"""
        invalid_settings = []

        if cls.RIGIDLAB_THREADS < 1:
            invalid_settings.append("RIGIDLAB_THREADS")
        if cls.NEWTON_TOL <= 0:
            invalid_settings.append("NEWTON_TOL")
        if cls.SHOCK_TOL <= 0:
            invalid_settings.append("SHOCK_TOL")
        if cls.MAX_NEWTON_ITERS < 1:
            invalid_settings.append("MAX_NEWTON_ITERS")
        if cls.CONTINUATION_STEPS < 1:
            invalid_settings.append("CONTINUATION_STEPS")
        if cls.FD_STEP <= 0:
            invalid_settings.append("FD_STEP")
        if cls.FD_SCHEME not in FD_SCHEMES:
            invalid_settings.append("FD_SCHEME")

        # stdout carries command data, so report on stderr only
        if invalid_settings:
            print(f"ERROR: Invalid environment settings: {', '.join(invalid_settings)}", file=sys.stderr)
            if not DOTENV_AVAILABLE:
                print("Consider installing python-dotenv and creating a .env file", file=sys.stderr)
            return False

        return True

    @classmethod
    def get_solver_config(cls):
        """Get solver defaults"""
        return {
            'newton_tol': cls.NEWTON_TOL,
            'shock_tol': cls.SHOCK_TOL,
            'max_newton_iters': cls.MAX_NEWTON_ITERS,
            'continuation_steps': cls.CONTINUATION_STEPS
        }

    @classmethod
    def get_fd_config(cls):
        """Get finite-difference defaults"""
        return {
            'step': cls.FD_STEP,
            'scheme': cls.FD_SCHEME
        }

    @classmethod
    def thread_count(cls):
        """Worker cap for grid sampling, never below one"""
        return max(1, cls.RIGIDLAB_THREADS)

settings = Settings()

# Validate settings on import
settings.validate_settings()
