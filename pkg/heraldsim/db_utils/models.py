"""
The SQLAlchemy models for storing sweep results.

One SweepRun row describes a sweep (circuit, loss mapping and numerical
settings); its MeritRecord rows hold one grid point each.
"""

from sqlalchemy import Column, DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class SweepRun(Base):
    __tablename__ = "sweep_run"

    id = Column(Integer, primary_key=True, autoincrement=True, doc="The id of the sweep")
    scheme = Column(String(64), nullable=False, doc="The name of the swept circuit")
    loss_mapping = Column(Text, doc="The channels eta1 and eta2 stand for")
    rel_tol = Column(Float, doc="The tolerance of the adaptive cutoff")
    d_max = Column(Integer, doc="The largest cutoff allowed")
    created_at = Column(DateTime, doc="The time the sweep was stored")

    records = relationship("MeritRecord", back_populates="run")


class MeritRecord(Base):
    __tablename__ = "merit_record"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(
        Integer,
        ForeignKey("sweep_run.id"),
        nullable=False,
        doc="The sweep the grid point belongs to",
    )
    eta1 = Column(Float, nullable=False, doc="The first transmission")
    eta2 = Column(Float, nullable=False, doc="The second transmission")
    probability = Column(Float, doc="The heralding probability p")
    fidelity = Column(Float, doc="The fidelity F to the target")
    wln = Column(Float, doc="The Wigner logarithmic negativity")
    d_used = Column(Integer, doc="The Fock cutoff of the heralded state")
    seconds = Column(Float, doc="The wall time of the grid point")

    run = relationship("SweepRun", back_populates="records")
