from integrate.compile import OdeSystem, compile_system
from integrate.errors import CompileError, IntegrationError, StepUnderflowError
from integrate.runge_kutta import DEFAULT_CONTROL, integrate_adaptive, integrate_fixed, rk4_step
from integrate.tape import RADICAND_FLOOR, Tape
from integrate.trajectory import PHYSICAL_TIME, REPARAMETERIZED, Trajectory, reconstruct_time
