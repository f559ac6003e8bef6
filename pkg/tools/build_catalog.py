"""Regenerate the bundled CMAF catalog document.

The control statements are illustrative: the framework names its requirement
areas but the normative control text lives in the national decree, so every
statement here is authored to fit the level descriptors.

Usage: python3 tools/build_catalog.py > src/cmaf/data/cmaf_catalog.json
"""

import json
import sys

CATALOG_ID = "cmaf"
VERSION = "1.0.0"

GENERIC = {
    1: "Activities addressing {topic} are performed, at least in response to incidents or requests.",
    2: "A plan for {topic} is documented and approved by management, with assigned owners and target dates.",
    3: "{Topic} follows a documented, standardized method applied consistently to all essential services in scope.",
    4: "Objectives for {topic} are defined and their achievement is monitored, measured and reported to management.",
    5: "Measurements of {topic} feed a continuous improvement cycle prioritized by risk and cost-benefit analysis.",
}

GENERIC_GUIDANCE = {
    4: "Objectives should be specific, measurable, achievable, realistic and time-bound where possible.",
}

# unit id -> (title, topic, [L1..L5 unit-specific statements])
LEAVES = {
    "A1": ("Business Environment", "the business environment analysis", [
        "The essential services provided by the organization are identified, at least informally.",
        "Dependencies of essential services on network and information systems are recorded in a maintained register.",
        "Roles, responsibilities and priorities for protecting essential services are set through a standard business impact analysis.",
        "The business impact analysis is reviewed against defined objectives and deviations are tracked to closure.",
        "Changes in the business environment trigger a reassessment of service criticality and protection priorities.",
    ]),
    "A2": ("Asset Management", "asset management", [
        "Key hardware and software assets supporting essential services are listed.",
        "An asset inventory with named owners is maintained and updated according to a defined plan.",
        "Assets are inventoried and classified with a standard method covering hardware, software, data flows and external systems.",
        "Inventory accuracy is measured through periodic reconciliation against discovery data, with a target accuracy rate.",
        "Asset discovery is automated and reconciliation discrepancies are used to improve inventory processes.",
    ]),
    "A3": ("Risk Assessment", "risk assessment", [
        "Risks to essential services are identified after incidents or on request.",
        "A risk assessment plan defines scope, frequency and responsible persons.",
        "Risk assessments follow a documented methodology covering threats, vulnerabilities, likelihood and impact.",
        "Risk assessment results are tracked with key risk indicators against defined thresholds.",
        "Threat intelligence and incident lessons are used to refine the risk methodology.",
    ]),
    "A4": ("Risk Management Strategy", "the risk management strategy", [
        "Risk treatment decisions are taken case by case.",
        "A risk management strategy, including risk appetite, is documented and approved.",
        "Risk treatment plans are produced for all risks above the defined tolerance using a standard template.",
        "Implementation of risk treatment plans is monitored against deadlines and residual risk targets.",
        "Risk treatment options are selected through documented cost-benefit analysis, reviewed every strategy cycle.",
    ]),
    "A5": ("Supply Chain Risk Management", "supply chain risk management", [
        "Suppliers with access to systems or data of essential services are known.",
        "Security requirements for suppliers are defined and included in new contracts.",
        "Suppliers are assessed for security risk with a standard procedure before onboarding and at renewal.",
        "Supplier compliance with contractual security requirements is measured and reported.",
        "Supplier security performance data drives supplier selection and contract renegotiation.",
    ]),
    "A6": ("Self-Assessment - Improvement", "self-assessment and improvement", [
        "Security weaknesses are corrected when they are identified.",
        "A plan for periodic security self-assessment exists.",
        "Self-assessments are performed with a standard framework and their results are documented.",
        "Corrective actions from self-assessments have targets and their completion is measured.",
        "Self-assessment results are compared across cycles and used to improve the security program.",
    ]),
    "B7.1": ("Information Security Policy, Processes and Procedures", "the information security policy and its procedures", [
        "Security rules exist, even if they are not formally documented.",
        "An information security policy is documented and approved by top management.",
        "Supporting security processes and procedures are documented in a standard format and aligned with the policy.",
        "Policy compliance is measured with defined indicators.",
        "The policy framework is revised after significant changes and improved from measured compliance.",
    ]),
    "B7.2": ("Communication and acceptance", "policy communication and acceptance", [
        "Security rules are communicated to staff when needed.",
        "A communication plan for the security policy towards staff and third parties is in place.",
        "All staff acknowledge the security policy through a standard process at hiring and after each revision.",
        "Acknowledgement rates are measured against a target.",
        "Staff feedback is used to improve the clarity and acceptance of the policy.",
    ]),
    "B8.1": ("Asset Management", "assignment of assets to identities", [
        "Accounts and the assets they can reach are known for critical systems.",
        "A register of accounts and their assigned assets is planned and maintained.",
        "Every account is linked to an identified owner and the assets it can access in a standard register.",
        "Orphaned and unassigned accounts are measured and kept below a defined threshold.",
        "Identity and asset records are reconciled automatically and reconciliation errors drive process changes.",
    ]),
    "B8.2": ("Access control for privileged accounts", "privileged account management", [
        "Privileged accounts are known to system administrators.",
        "A plan to restrict and inventory privileged accounts is documented.",
        "Privileged access is granted through a standard approval procedure and uses dedicated named accounts.",
        "Privileged account activity is logged and reviewed against defined indicators.",
        "Just-in-time privileged access and session recording are adopted based on measured risk reduction.",
    ]),
    "B8.3": ("Management of equipment for administrative purposes", "administration equipment management", [
        "Administrators use identified devices for administration tasks.",
        "A plan to provide dedicated administration workstations is approved.",
        "Administration is performed only from hardened, dedicated workstations configured to a standard baseline.",
        "Compliance of administration workstations with the baseline is measured periodically.",
        "The administration workstation baseline is improved from compliance measurements and threat changes.",
    ]),
    "B8.4": ("Access Control", "access control", [
        "Access to systems is restricted by passwords or equivalent means.",
        "Access rights are granted according to a documented plan based on business need.",
        "Access is managed through a standard least-privilege process covering joiners, movers and leavers.",
        "Access rights reviews are performed and their completion and findings are measured.",
        "Access review results and access anomalies are used to refine role models.",
    ]),
    "B8.5": ("Authentication mechanisms", "authentication", [
        "Users authenticate with individual credentials.",
        "An authentication plan defines minimum credential requirements.",
        "Multi-factor authentication is applied through a standard configuration for remote and privileged access.",
        "Authentication failures and multi-factor coverage are monitored against targets.",
        "Authentication methods are upgraded based on measured effectiveness and emerging threats.",
    ]),
    "B9": ("Physical and Environmental security", "physical and environmental security", [
        "Data center and equipment rooms are locked.",
        "A plan for physical and environmental protection of facilities is documented.",
        "Physical access control, fire suppression, power and climate protection follow a standard design in all facilities.",
        "Physical access logs and environmental sensor data are reviewed against defined thresholds.",
        "Physical protections are improved from incident data and periodic cost-benefit review.",
    ]),
    "B10.1": ("Systems Security", "systems security", [
        "Operating system updates are applied when problems occur.",
        "A patching and hardening plan for servers and network devices is documented.",
        "Systems are configured to standard hardening baselines and patched within defined time frames.",
        "Patch latency and baseline compliance are measured for all systems.",
        "Hardening baselines and patch priorities are tuned from vulnerability and exploitation data.",
    ]),
    "B10.2": ("Application Security", "application security", [
        "Known security issues in business applications are fixed when reported.",
        "A plan for the secure configuration and updating of applications is documented.",
        "Applications are deployed with a standard secure configuration, logging and session management.",
        "Application vulnerabilities are tracked against remediation time targets.",
        "Application security controls are improved from vulnerability trends.",
    ]),
    "B10.3": ("Security in Application Development", "secure application development", [
        "Developers address security issues when they are found.",
        "Security requirements are included in development plans.",
        "A secure development lifecycle with code review and security testing covers in-house and outsourced development.",
        "Security defects are measured per release against defined targets.",
        "Development practices are improved through root cause analysis of security defects.",
    ]),
    "B11.1": ("Encryption", "encryption", [
        "Encryption is used for some sensitive data transfers.",
        "A plan defines which data must be encrypted in transit and at rest.",
        "Approved cryptographic algorithms and key management procedures are applied to all sensitive data.",
        "Encryption coverage and key lifecycle events are monitored against targets.",
        "Cryptographic standards are reviewed and migrated ahead of known weaknesses.",
    ]),
    "B11.2": ("Data Classification", "data classification", [
        "Sensitive data is recognized by the staff who handle it.",
        "A data classification scheme is documented.",
        "All information is labeled and handled according to a standard classification procedure.",
        "Classification accuracy is sampled and measured.",
        "The classification scheme and handling rules are refined from measured mislabeling and incidents.",
    ]),
    "B12": ("Backups", "backup management", [
        "Backups of important data are taken.",
        "A backup plan defines scope, frequency and retention.",
        "Backups follow a standard procedure, are protected from tampering and are kept off-site or offline.",
        "Restore tests are performed and their success rate and duration are measured.",
        "The backup strategy is adjusted from restore test results and changing recovery objectives.",
    ]),
    "B13.1": ("Traffic filtering", "traffic filtering", [
        "A firewall protects the internet perimeter.",
        "A plan defines filtering rules for perimeter and internal network boundaries.",
        "Traffic is filtered at all boundaries with a default-deny rule set maintained through change control.",
        "Firewall rule reviews are performed and unused or risky rules are counted.",
        "Filtering policies are optimized from traffic analysis and threat intelligence.",
    ]),
    "B13.2": ("Segregation of systems", "system segregation", [
        "Some critical systems are separated from the office network.",
        "A network segregation plan is documented.",
        "Networks are segmented into zones with controlled interconnections according to a standard architecture.",
        "Cross-zone traffic is monitored against the approved flow matrix.",
        "Segmentation is refined from monitored flows and attack path analysis.",
    ]),
    "B13.3": ("Malware protection", "malware protection", [
        "Anti-malware software is installed on some systems.",
        "A malware protection plan covers endpoints, servers and email.",
        "Malware protection runs on all applicable systems with a centrally managed standard configuration.",
        "Detection rates and signature currency are monitored against targets.",
        "Malware defenses are improved from detection effectiveness analysis.",
    ]),
    "B14.1": ("Security Assessments", "security assessment", [
        "Security tests are performed occasionally.",
        "A plan for vulnerability scanning and penetration testing is documented.",
        "Vulnerability scans and penetration tests follow a standard methodology and schedule.",
        "Findings from security assessments are tracked against remediation targets.",
        "The scope and depth of testing are adapted from findings trends and risk.",
    ]),
    "B14.2": ("Compliance Checking", "compliance checking", [
        "Compliance with security requirements is checked after incidents.",
        "A compliance checking plan covers legal and policy requirements.",
        "Compliance checks are performed with standard checklists and documented results.",
        "Compliance levels are measured and reported to management.",
        "Compliance checking is automated where effective and improved from measured results.",
    ]),
    "B15": ("Change Management", "change management", [
        "Changes to systems are communicated to affected staff.",
        "A change management plan defines approval requirements.",
        "All changes follow a standard process including security impact assessment, approval, testing and rollback planning.",
        "Change success rates and emergency changes are measured against targets.",
        "The change process is improved from analysis of failed and unauthorized changes.",
    ]),
    "B16": ("Awareness and Training", "security awareness and training", [
        "Staff receive security guidance occasionally.",
        "An awareness and training plan is documented.",
        "All staff complete standard role-based security training at hiring and periodically.",
        "Training completion and phishing simulation results are measured against targets.",
        "Training content is adapted from measured behavior and incident data.",
    ]),
    "C17": ("Threat Detection", "threat detection", [
        "Security events are noticed through system alerts or user reports.",
        "A plan for logging and monitoring of critical systems is documented.",
        "Logs from critical systems are collected centrally and analyzed with standard detection rules.",
        "Detection coverage and time to detect are measured.",
        "Detection rules are tuned with threat intelligence and exercise results.",
    ]),
    "C18": ("Incident Management", "incident management", [
        "Incidents are handled when they occur.",
        "An incident response plan with roles and contact points is documented.",
        "Incidents are handled through a standard procedure including classification, escalation and notification of the competent authority.",
        "Incident response times are measured against defined targets.",
        "Post-incident reviews drive improvement of the response capability.",
    ]),
    "C19": ("Business Continuity", "business continuity", [
        "Workarounds exist for some service disruptions.",
        "A business continuity plan covering essential services is documented.",
        "Business continuity plans follow a standard methodology derived from the business impact analysis.",
        "Continuity exercises are performed and their results are measured against recovery objectives.",
        "Continuity arrangements are improved from exercise results and cost-benefit analysis.",
    ]),
    "C20": ("Disaster Recovery", "disaster recovery", [
        "Critical systems can be restored by technical staff.",
        "A disaster recovery plan is documented.",
        "Disaster recovery procedures are standardized, with defined recovery time and recovery point objectives.",
        "Disaster recovery tests measure achieved recovery times and recovery points.",
        "Recovery architecture is improved from test results and cost-benefit analysis.",
    ]),
}

PARENTS = {
    "B7": ("Policies, Processes and Procedures for the protection of essential services", ["B7.1", "B7.2"]),
    "B8": ("Identity Management and Access Control", ["B8.1", "B8.2", "B8.3", "B8.4", "B8.5"]),
    "B10": ("Systems and Applications security", ["B10.1", "B10.2", "B10.3"]),
    "B11": ("Data Security", ["B11.1", "B11.2"]),
    "B13": ("Security Technologies", ["B13.1", "B13.2", "B13.3"]),
    "B14": ("Systems Testing", ["B14.1", "B14.2"]),
}

PILLARS = [
    ("A", "IDENTIFICATION", ["A1", "A2", "A3", "A4", "A5", "A6"]),
    ("B", "PROTECTION", ["B7", "B8", "B9", "B10", "B11", "B12", "B13", "B14", "B15", "B16"]),
    ("C", "DEFENSE", ["C17", "C18", "C19", "C20"]),
]


def leaf(unit_id):
    title, topic, specific = LEAVES[unit_id]
    controls = []
    for level in range(1, 6):
        statements = [(specific[level - 1], None)]
        generic = GENERIC[level].format(topic=topic, Topic=topic[0].upper() + topic[1:])
        statements.append((generic, GENERIC_GUIDANCE.get(level)))
        for seq, (statement, guidance) in enumerate(statements, start=1):
            control = {"id": f"{unit_id}-L{level}-{seq:02d}", "level": level, "statement": statement}
            if guidance:
                control["guidance"] = guidance
            controls.append(control)
    return {"id": unit_id, "title": title, "controls": controls}


def requirement(unit_id):
    if unit_id in PARENTS:
        title, children = PARENTS[unit_id]
        return {"id": unit_id, "title": title, "sub_requirements": [leaf(c) for c in children]}
    return leaf(unit_id)


def main():
    doc = {
        "catalog_id": CATALOG_ID,
        "version": VERSION,
        "pillars": [
            {"id": pid, "title": title, "requirements": [requirement(r) for r in reqs]}
            for pid, title, reqs in PILLARS
        ],
    }
    json.dump(doc, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
